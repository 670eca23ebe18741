#include "freezelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace freezelab {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_rows(std::size_t dim, std::span<const double> rowmajor, double tol) {
  if (rowmajor.size() != dim * dim) throw std::invalid_argument("from_rows: size mismatch");
  double scale = 0.0;
  for (double v : rowmajor) scale = std::max(scale, std::abs(v));
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double a = rowmajor[i * dim + j];
      const double b = rowmajor[j * dim + i];
      if (std::abs(a - b) > tol * std::max(scale, 1.0))
        throw std::invalid_argument("from_rows: input is not symmetric");
      m.set(i, j, 0.5 * (a + b));
    }
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

double frobenius_norm(const SymMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> matvec(const SymMatrix& m, std::span<const double> x) {
  if (x.size() != m.dim()) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: size mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

namespace {

double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomp eigh(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw std::invalid_argument("eigh: empty matrix");

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
  Matrix v = Matrix::identity(n);

  const double stop = 1e-14 * std::max(frobenius_norm(m), 1e-300);
  const int max_sweeps = 100;

  int sweep = 0;
  while (offdiag_norm(a) > stop) {
    if (++sweep > max_sweeps) throw std::runtime_error("eigh: no convergence within sweep cap");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip - s * (aiq + tau * aip);
          a(p, i) = a(i, p);
          a(i, q) = aiq + s * (aip - tau * aiq);
          a(q, i) = a(i, q);
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomp d;
  d.values.resize(n);
  d.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    d.values[j] = a(src, src);
    // Sign convention: the entry of largest magnitude is positive.
    std::size_t imax = 0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) > vmax) {
        vmax = std::abs(v(i, src));
        imax = i;
      }
    }
    const double sign = v(imax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) d.vectors(i, j) = sign * v(i, src);
  }
  return d;
}

Matrix cholesky(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw std::invalid_argument("cholesky: empty matrix");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
  const double tol = 1e-12 * std::max(max_diag, 1.0);

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -tol) throw std::domain_error("cholesky: matrix is not positive semidefinite");
    if (d <= tol) {
      // Semidefinite pivot: zero column.
      for (std::size_t i = j; i < n; ++i) l(i, j) = 0.0;
      continue;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

SymMatrix invert_spd(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw std::invalid_argument("invert_spd: empty matrix");

  // Strict Cholesky: every pivot must be positive.
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) throw std::domain_error("invert_spd: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }

  // Solve L L^T X = I column by column, then symmetrize against roundoff.
  Matrix x(n, n);
  std::vector<double> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) col[i] = (i == c) ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = col[i];
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * col[k];
      col[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = col[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * col[k];
      col[ii] = s / l(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) x(i, c) = col[i];
  }
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.set(i, j, 0.5 * (x(i, j) + x(j, i)));
  return out;
}

}  // namespace freezelab
