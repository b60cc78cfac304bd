#include "rankr/layout.hpp"

#include <utility>

namespace rankr {

namespace {

struct Extent {
  std::size_t rows;
  std::size_t cols;
};

Extent extent(const PartShape& s) {
  return std::visit(
      [](const auto& v) -> Extent {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScalarShape>) return {1, 1};
        else if constexpr (std::is_same_v<T, VectorShape>) return {v.dim, 1};
        else if constexpr (std::is_same_v<T, MatrixShape>) return {v.rows, v.cols};
        else return {v.degree + 1, 1};
      },
      s);
}

}  // namespace

VariableLayout& VariableLayout::add_scalar(std::string name) {
  parts_.push_back({std::move(name), ScalarShape{}});
  return *this;
}

VariableLayout& VariableLayout::add_vector(std::string name, std::size_t dim) {
  parts_.push_back({std::move(name), VectorShape{dim}});
  return *this;
}

VariableLayout& VariableLayout::add_matrix(std::string name, std::size_t rows, std::size_t cols) {
  parts_.push_back({std::move(name), MatrixShape{rows, cols}});
  return *this;
}

VariableLayout& VariableLayout::add_polynomial(std::string name, std::size_t degree) {
  parts_.push_back({std::move(name), PolynomialShape{degree}});
  return *this;
}

std::size_t VariableLayout::part_dim(std::size_t part) const {
  const Extent e = extent(parts_.at(part).shape);
  return e.rows * e.cols;
}

std::size_t VariableLayout::offset(std::size_t part) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < part; ++i) off += part_dim(i);
  return off;
}

std::size_t VariableLayout::total_dim() const { return offset(parts_.size()); }

std::size_t VariableLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].name == name) return i;
  throw Error(ErrorKind::LayoutMismatch, "no part named " + name);
}

Vector pack(const VariableLayout& layout, const std::vector<Matrix>& values) {
  const auto& parts = layout.parts();
  if (values.size() != parts.size()) {
    throw Error(ErrorKind::LayoutMismatch, "expected " + std::to_string(parts.size()) + " parts, got " +
                                               std::to_string(values.size()));
  }
  Vector out(static_cast<Eigen::Index>(layout.total_dim()));
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Extent e = extent(parts[i].shape);
    const Matrix& m = values[i];
    const auto rows = static_cast<Eigen::Index>(e.rows);
    const auto cols = static_cast<Eigen::Index>(e.cols);
    if (std::holds_alternative<PolynomialShape>(parts[i].shape)) {
      if (m.cols() != 1 || m.rows() > rows) {
        throw Error(ErrorKind::LayoutMismatch, "part " + parts[i].name + " exceeds its degree bound");
      }
      out.segment(pos, rows).setZero();
      out.segment(pos, m.rows()) = m.col(0);
    } else {
      if (m.rows() != rows || m.cols() != cols) {
        throw Error(ErrorKind::LayoutMismatch, "part " + parts[i].name + " has shape " + std::to_string(m.rows()) +
                                                   "x" + std::to_string(m.cols()) + ", expected " +
                                                   std::to_string(rows) + "x" + std::to_string(cols));
      }
      out.segment(pos, rows * cols) = m.reshaped();
    }
    pos += rows * cols;
  }
  return out;
}

std::vector<Matrix> unpack(const VariableLayout& layout, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != layout.total_dim()) {
    throw Error(ErrorKind::LayoutMismatch, "vector has " + std::to_string(v.size()) + " entries, layout needs " +
                                               std::to_string(layout.total_dim()));
  }
  std::vector<Matrix> out;
  Eigen::Index pos = 0;
  for (const auto& p : layout.parts()) {
    const Extent e = extent(p.shape);
    const auto rows = static_cast<Eigen::Index>(e.rows);
    const auto cols = static_cast<Eigen::Index>(e.cols);
    out.emplace_back(v.segment(pos, rows * cols).reshaped(rows, cols));
    pos += rows * cols;
  }
  return out;
}

}  // namespace rankr
