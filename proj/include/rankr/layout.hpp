#pragma once

#include "rankr/core.hpp"

#include <string>
#include <variant>
#include <vector>

namespace rankr {

struct ScalarShape {};
struct VectorShape {
  std::size_t dim;
};
struct MatrixShape {  // packed column-major
  std::size_t rows;
  std::size_t cols;
};
struct PolynomialShape {  // univariate, ascending coefficients, zero-padded to degree + 1
  std::size_t degree;
};

using PartShape = std::variant<ScalarShape, VectorShape, MatrixShape, PolynomialShape>;

struct LayoutPart {
  std::string name;
  PartShape shape;
};

// Ordered description of how structured unknowns sit in one flat vector.
// Every part is handled as a matrix: scalars 1x1, vectors and polynomials
// as columns.
class VariableLayout {
 public:
  VariableLayout& add_scalar(std::string name);
  VariableLayout& add_vector(std::string name, std::size_t dim);
  VariableLayout& add_matrix(std::string name, std::size_t rows, std::size_t cols);
  VariableLayout& add_polynomial(std::string name, std::size_t degree);

  const std::vector<LayoutPart>& parts() const { return parts_; }
  std::size_t total_dim() const;
  std::size_t offset(std::size_t part) const;
  std::size_t part_dim(std::size_t part) const;
  std::size_t index_of(const std::string& name) const;

 private:
  std::vector<LayoutPart> parts_;
};

Vector pack(const VariableLayout& layout, const std::vector<Matrix>& values);
std::vector<Matrix> unpack(const VariableLayout& layout, const Vector& v);

}  // namespace rankr
