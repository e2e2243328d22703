#ifndef BIKECAST_MATRIX_HPP
#define BIKECAST_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace bikecast {

// Dense row-major matrix of doubles. Kept deliberately small: the
// learners only need element access, row views and sizes.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }

  std::span<double> row(size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(size_t r) const { return {data.data() + r * cols, cols}; }

  bool empty() const { return rows == 0 || cols == 0; }

  bool operator==(const Matrix& other) const = default;
};

} // namespace bikecast

#endif
