#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vvi {

using Vec = std::vector<double>;

/// Dense row-major matrix. Sizes here are tiny (n <= a few dozen), so no
/// expression templates or BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  /// Throws std::invalid_argument on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  Matrix transposed() const;
  Vec apply(std::span<const double> x) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
/// Max-abs entry norm.
double max_abs(const Matrix& a);

/// Gaussian elimination with partial pivoting. Returns nullopt when a pivot
/// falls below `rel_pivot_tol` times the largest entry of the matrix.
std::optional<Vec> solve_linear(Matrix a, Vec b, double rel_pivot_tol = 1e-14);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Only the lower triangle is read.
Vec symmetric_eigenvalues(const Matrix& a, double tol = 1e-14, int max_sweeps = 100);

}  // namespace vvi
