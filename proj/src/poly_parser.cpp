#include "rankr/polynomial.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

namespace rankr {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    Polynomial p = sum();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool starts_factor() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '(';
  }

  Polynomial sum() {
    Polynomial acc(vars_);
    bool first = true;
    for (;;) {
      skip_ws();
      bool negate = false;
      bool had_sign = false;
      while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        negate ^= s_[pos_] == '-';
        had_sign = true;
        ++pos_;
        skip_ws();
      }
      if (!first && !had_sign) break;
      if (!starts_factor()) throw ParseError("expected a term", pos_);
      Polynomial t = product();
      if (negate) acc -= t;
      else acc += t;
      first = false;
      skip_ws();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
    }
    return acc;
  }

  Polynomial product() {
    Polynomial acc = power();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        if (!starts_factor()) throw ParseError("expected a factor after '*'", pos_);
        acc *= power();
      } else if (starts_factor()) {
        acc *= power();
      } else {
        return acc;
      }
    }
  }

  Polynomial power() {
    Polynomial base = primary();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected a non-negative integer exponent", start);
      const unsigned long k = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (k > 1000) throw ParseError("exponent too large", start);
      return pow(base, static_cast<unsigned>(k));
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    const std::size_t start = pos_;
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = sum();
      if (!peek(')')) throw ParseError("missing ')'", pos_);
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Polynomial::constant(vars_, number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == id) return Polynomial::variable(vars_, i);
      if (id == "i") return Polynomial::constant(vars_, Scalar(0.0, 1.0));
      throw ParseError("unknown variable '" + id + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", start);
  }

  double number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", start);
    // The exponent marker only counts when digits follow; otherwise the 'e'
    // starts an identifier.
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        digits();
      }
    }
    return std::strtod(std::string(s_.substr(start, pos_ - start)).c_str(), nullptr);
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_poly(std::string_view text, const std::vector<std::string>& vars) {
  Polynomial probe(vars);  // validates the variable list
  return Parser(text, vars).parse();
}

}  // namespace rankr
