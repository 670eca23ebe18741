#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace freezelab {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> data() const { return a_; }

  static Matrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// Symmetric matrix with full row-major storage; set() writes both triangles.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

  // Validates symmetry of row-major input (relative tolerance on the largest entry).
  static SymMatrix from_rows(std::size_t dim, std::span<const double> rowmajor, double tol = 1e-12);

  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    a_[i * dim_ + j] = v;
    a_[j * dim_ + i] = v;
  }

  std::size_t dim() const { return dim_; }
  std::span<const double> data() const { return a_; }

  static SymMatrix identity(std::size_t n);

 private:
  std::size_t dim_ = 0;
  std::vector<double> a_;
};

struct EigenDecomp {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the unit eigenvector for values[j]
};

// Cyclic Jacobi rotations; converged when the off-diagonal Frobenius norm falls
// below 1e-14 * ||m||_F, sweep cap 100.
EigenDecomp eigh(const SymMatrix& m);

// Inverse of a strictly positive definite matrix via Cholesky; throws
// std::domain_error if a pivot is not positive.
SymMatrix invert_spd(const SymMatrix& m);

// Lower-triangular factor L with L L^T = m for positive semidefinite m.
// Pivots below 1e-12 * max-diagonal are clamped to a zero column; pivots below
// the negative of that tolerance throw std::domain_error.
Matrix cholesky(const SymMatrix& m);

std::vector<double> matvec(const Matrix& m, std::span<const double> x);
std::vector<double> matvec(const SymMatrix& m, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> a);
double frobenius_norm(const SymMatrix& m);

}  // namespace freezelab
