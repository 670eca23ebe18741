#include "freezelab/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "freezelab/linalg.hpp"

namespace freezelab {

namespace {

constexpr int kMaxDegree = 200;

void check_degree(int n) {
  if (n < 1 || n > kMaxDegree) throw std::invalid_argument("degree out of range [1, 200]");
}

// Orthonormal-recurrence evaluation q_n and q_n' at x for the measure with
// monic recurrence coefficients (a_k, b_k^2): x q_k = b_{k+1} q_{k+1} + a_k q_k + b_k q_{k-1}.
// The Newton ratio q/q' is normalization independent.
struct OrthoEval {
  double q, dq;
};

template <class DiagFn, class OffFn>
OrthoEval orthonormal_eval(int n, double x, DiagFn a, OffFn b) {
  double qm = 0.0, dqm = 0.0;  // q_{k-1}
  double q = 1.0, dq = 0.0;    // q_k
  for (int k = 0; k < n; ++k) {
    const double bk1 = b(k + 1);
    const double qn = ((x - a(k)) * q - b(k) * qm) / bk1;
    const double dqn = ((x - a(k)) * dq + q - b(k) * dqm) / bk1;
    qm = q;
    dqm = dq;
    q = qn;
    dq = dqn;
  }
  return {q, dq};
}

template <class DiagFn, class OffFn>
std::vector<double> golub_welsch(int n, DiagFn a, OffFn b) {
  SymMatrix jac(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) jac.set(i, i, a(i));
  for (int i = 1; i < n; ++i) jac.set(i - 1, i, b(i));
  EigenDecomp d = eigh(jac);
  // Newton polish on the orthonormal recurrence, at most 5 steps.
  for (double& z : d.values) {
    for (int it = 0; it < 5; ++it) {
      const OrthoEval e = orthonormal_eval(n, z, a, b);
      if (e.dq == 0.0) break;
      const double step = e.q / e.dq;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
  }
  std::sort(d.values.begin(), d.values.end());
  return d.values;
}

}  // namespace

PolyValue hermite_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_eval: negative degree");
  double hm = 0.0, h = 1.0;  // H_{-1}, H_0
  for (int k = 0; k < n; ++k) {
    const double hn = 2.0 * x * h - 2.0 * k * hm;
    hm = h;
    h = hn;
  }
  return {h, n == 0 ? 0.0 : 2.0 * n * hm};
}

PolyValue laguerre_eval(int n, double alpha, double x) {
  if (n < 0) throw std::invalid_argument("laguerre_eval: negative degree");
  if (alpha < -1.0) throw std::invalid_argument("laguerre_eval: requires alpha >= -1");
  double lm = 0.0, l = 1.0;  // L_{-1}, L_0
  for (int k = 0; k < n; ++k) {
    const double ln = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm) / (k + 1.0);
    lm = l;
    l = ln;
  }
  // d/dx L_n^(alpha) = -L_{n-1}^(alpha+1).
  if (n == 0) return {l, 0.0};
  double dm = 0.0, d = 1.0;
  for (int k = 0; k < n - 1; ++k) {
    const double dn = ((2.0 * k + 2.0 + alpha - x) * d - (k + 1.0 + alpha) * dm) / (k + 1.0);
    dm = d;
    d = dn;
  }
  return {l, -d};
}

ZeroSet hermite_zeros(int n) {
  check_degree(n);
  auto a = [](int) { return 0.0; };
  auto b = [](int k) { return std::sqrt(0.5 * k); };
  std::vector<double> z = golub_welsch(n, a, b);
  // Exact symmetrization about zero (middle zero of odd degree becomes 0).
  for (int i = 0, j = n - 1; i <= j; ++i, --j) {
    const double v = 0.5 * (z[j] - z[i]);
    z[i] = -v;
    z[j] = v;
  }
  return {ZeroSet::Family::Hermite, n, 0.0, std::move(z)};
}

ZeroSet laguerre_zeros(int n, double alpha) {
  check_degree(n);
  if (alpha <= -1.0) throw std::invalid_argument("laguerre_zeros: requires alpha > -1");
  auto a = [alpha](int k) { return 2.0 * k + alpha + 1.0; };
  auto b = [alpha](int k) { return std::sqrt(k * (k + alpha)); };
  std::vector<double> z = golub_welsch(n, a, b);
  return {ZeroSet::Family::Laguerre, n, alpha, std::move(z)};
}

double inverse_zero_sum(int n, double alpha) {
  const ZeroSet zs = laguerre_zeros(n, alpha);
  double s = 0.0;
  // Smallest zeros dominate; ascending order keeps the summation stable.
  for (double z : zs.zeros) s += 1.0 / z;
  return s;
}

double ZeroIdentityReport::max_deviation() const {
  double m = 0.0;
  for (const IdentityEntry& e : entries)
    if (!e.informational) m = std::max(m, e.deviation);
  return m;
}

ZeroIdentityReport hermite_identity_report(int n) {
  const ZeroSet zs = hermite_zeros(n);
  ZeroIdentityReport rep;

  double sum_sq = 0.0;
  for (double z : zs.zeros) sum_sq += z * z;
  const double sum_sq_target = 0.5 * n * (n - 1.0);
  rep.entries.push_back({"hermite_sum_sq", sum_sq, sum_sq_target,
                         std::abs(sum_sq - sum_sq_target), false});

  double log_vdm = 0.0;  // 2 sum_{i<j} ln(z_i - z_j) over descending pairs
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) log_vdm += 2.0 * std::log(zs.zeros[j] - zs.zeros[i]);
  double target = -0.5 * n * (n - 1.0) * std::log(2.0);
  for (int j = 2; j <= n; ++j) target += j * std::log(static_cast<double>(j));
  rep.entries.push_back({"hermite_log_vandermonde", log_vdm, target,
                         std::abs(log_vdm - target), false});
  return rep;
}

ZeroIdentityReport laguerre_identity_report(int n, double nu) {
  check_degree(n);
  if (!(nu > 0.0)) throw std::invalid_argument("laguerre_identity_report: requires nu > 0");
  const ZeroSet zs = laguerre_zeros(n, nu - 1.0);
  std::vector<double> rsq(zs.zeros.size());
  for (std::size_t i = 0; i < rsq.size(); ++i) rsq[i] = 2.0 * zs.zeros[i];

  ZeroIdentityReport rep;
  double norm_sq = 0.0;
  for (double v : rsq) norm_sq += v;
  const double consistent = 2.0 * n * (n + nu - 1.0);
  rep.entries.push_back({"r_norm_sq", norm_sq, consistent,
                         std::abs(norm_sq - consistent), false});
  rep.entries.push_back({"r_norm_sq_printed", norm_sq, n * (n + nu - 1.0),
                         std::abs(norm_sq - n * (n + nu - 1.0)), true});

  // -||r||^2/2 + nu sum ln r_j^2 + 2 sum_{i<j} ln(r_i^2 - r_j^2)
  double pot = -0.5 * norm_sq;
  for (double v : rsq) pot += nu * std::log(v);
  for (std::size_t i = 0; i < rsq.size(); ++i)
    for (std::size_t j = i + 1; j < rsq.size(); ++j)
      pot += 2.0 * std::log(std::abs(rsq[i] - rsq[j]));
  double target = n * (n + nu - 1.0) * (std::log(2.0) - 1.0);
  for (int j = 2; j <= n; ++j) target += j * std::log(static_cast<double>(j));
  for (int j = 1; j <= n; ++j)
    target += (nu + j - 1.0) * std::log(nu + j - 1.0);
  rep.entries.push_back({"laguerre_log_potential", pot, target, std::abs(pot - target), false});
  return rep;
}

ZeroIdentityReport zero_identity_report(ZeroSet::Family family, int n, double nu) {
  if (family == ZeroSet::Family::Hermite) return hermite_identity_report(n);
  return laguerre_identity_report(n, nu);
}

}  // namespace freezelab
