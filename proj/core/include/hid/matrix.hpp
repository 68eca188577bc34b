#pragma once

#include <cstddef>
#include <vector>

namespace hid {

/// Dense row-major matrix of doubles. Used both for Eq.-style cost matrices
/// (rows = ground-truth side, cols = prediction side) and for person-to-group
/// similarity matrices.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  bool operator==(const Matrix&) const = default;
};

using CostMatrix = Matrix;
using SimilarityMatrix = Matrix;

}  // namespace hid
