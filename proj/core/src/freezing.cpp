#include "freezelab/freezing.hpp"

#include <cmath>
#include <stdexcept>

#include "freezelab/orthopoly.hpp"
#include "freezelab/specfun.hpp"

namespace freezelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> descending_zeros(const ZeroSet& zs) {
  std::vector<double> z(zs.zeros.rbegin(), zs.zeros.rend());
  return z;
}

}  // namespace

double PeakVector::norm_sq() const { return freezelab::norm_sq(coords); }

std::string to_string(LimitSystem s) {
  switch (s) {
    case LimitSystem::A: return "A";
    case LimitSystem::B: return "B";
    case LimitSystem::D: return "D";
    default: return "B-one-sided";
  }
}

PeakVector peak_vector(RootSystem system, int n, double nu) {
  switch (system) {
    case RootSystem::A: {
      PeakVector p{system, n, 0.0, descending_zeros(hermite_zeros(n))};
      return p;
    }
    case RootSystem::B: {
      if (!(nu > 0.0)) throw std::invalid_argument("peak_vector: B requires nu > 0");
      PeakVector p{system, n, nu, descending_zeros(laguerre_zeros(n, nu - 1.0))};
      for (double& v : p.coords) v = std::sqrt(2.0 * v);
      return p;
    }
    default: {
      if (n < 2) throw std::invalid_argument("peak_vector: D requires n >= 2");
      PeakVector p{system, n, 0.0, descending_zeros(laguerre_zeros(n - 1, 1.0))};
      for (double& v : p.coords) v = std::sqrt(2.0 * v);
      p.coords.push_back(0.0);
      return p;
    }
  }
}

double w_objective(RootSystem system, std::span<const double> y, double nu) {
  const int n = static_cast<int>(y.size());
  if (n < 1) throw std::invalid_argument("w_objective: empty point");
  if (system == RootSystem::D) throw std::invalid_argument("w_objective: defined for A and B");
  if (!chamber_contains(system, n, y))
    throw std::domain_error("w_objective: point outside the open chamber");
  double w = -0.5 * norm_sq(y);
  if (system == RootSystem::A) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) w += std::log(y[i] - y[j]);
  } else {
    if (nu < 0.0) throw std::invalid_argument("w_objective: requires nu >= 0");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) w += 2.0 * std::log(y[i] * y[i] - y[j] * y[j]);
    for (int i = 0; i < n; ++i) w += 2.0 * nu * std::log(y[i]);
  }
  return w;
}

namespace {

SymMatrix sigma_inv_a_bessel(const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  SymMatrix s(n);
  for (int i = 0; i < n; ++i) {
    double d = 1.0;
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      const double g = z[i] - z[l];
      d += 1.0 / (g * g);
    }
    s.set(i, i, d);
    for (int j = i + 1; j < n; ++j) {
      const double g = z[i] - z[j];
      s.set(i, j, -1.0 / (g * g));
    }
  }
  return s;
}

// Common form for B (with the 2 nu / r_i^2 term) and D (without it; r_N = 0
// contributes through the sums instead).
SymMatrix sigma_inv_br(const std::vector<double>& r, double nu, bool with_nu_term) {
  const int n = static_cast<int>(r.size());
  SymMatrix s(n);
  for (int i = 0; i < n; ++i) {
    double d = 1.0;
    if (with_nu_term) d += 2.0 * nu / (r[i] * r[i]);
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      const double gm = r[i] - r[l];
      const double gp = r[i] + r[l];
      d += 2.0 / (gm * gm) + 2.0 / (gp * gp);
    }
    s.set(i, i, d);
    for (int j = i + 1; j < n; ++j) {
      const double gm = r[i] - r[j];
      const double gp = r[i] + r[j];
      s.set(i, j, 2.0 / (gp * gp) - 2.0 / (gm * gm));
    }
  }
  return s;
}

}  // namespace

FrozenCovariance frozen_covariance(RootSystem system, Flavor flavor, int n, double nu) {
  FrozenCovariance fc;
  fc.system = system;
  fc.flavor = flavor;
  fc.n = n;
  fc.nu = nu;
  switch (system) {
    case RootSystem::A: {
      const PeakVector p = peak_vector(RootSystem::A, n);
      SymMatrix s = sigma_inv_a_bessel(p.coords);
      if (flavor == Flavor::Cauchy) {
        const double zsq = p.norm_sq();
        SymMatrix c(n);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j)
            c.set(i, j, (n + 1.0) * (s(i, j) + 2.0 * p.coords[i] * p.coords[j] / zsq));
        s = c;
      }
      fc.sigma_inv = s;
      break;
    }
    case RootSystem::B: {
      if (flavor == Flavor::Cauchy)
        throw std::invalid_argument("frozen_covariance: Cauchy flavor is defined for A only");
      if (!(nu > 0.0)) throw std::invalid_argument("frozen_covariance: B requires nu > 0");
      const PeakVector p = peak_vector(RootSystem::B, n, nu);
      fc.sigma_inv = sigma_inv_br(p.coords, nu, true);
      break;
    }
    default: {
      if (flavor == Flavor::Cauchy)
        throw std::invalid_argument("frozen_covariance: Cauchy flavor is defined for A only");
      if (n < 2) throw std::invalid_argument("frozen_covariance: D requires n >= 2");
      const PeakVector p = peak_vector(RootSystem::D, n);
      fc.sigma_inv = sigma_inv_br(p.coords, 0.0, false);
      break;
    }
  }
  fc.sigma = invert_spd(fc.sigma_inv);
  fc.eigen = eigh(fc.sigma_inv);
  return fc;
}

namespace {

// Normalized dual-polynomial kernel entries for system A.
double sigma_closed_entry(const std::vector<double>& z, int n, int i, int j) {
  double num = 0.0, di = 0.0, dj = 0.0;
  double fact = 1.0;  // 2^k k!
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= 2.0 * k;
    const double hi = hermite_eval(k, z[i]).value;
    const double hj = hermite_eval(k, z[j]).value;
    num += hi * hj / (fact * (n - k));
    di += hi * hi / fact;
    dj += hj * hj / fact;
  }
  return num / std::sqrt(di * dj);
}

}  // namespace

SymMatrix sigma_closed_a(int n) {
  const PeakVector p = peak_vector(RootSystem::A, n);
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      s.set(i, j, sign * sigma_closed_entry(p.coords, n, i, j));
    }
  return s;
}

SymMatrix sigma_cauchy_a_subtraction(int n) {
  const FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Bessel, n);
  const PeakVector p = peak_vector(RootSystem::A, n);
  const double zsq = p.norm_sq();
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      s.set(i, j, (fc.sigma(i, j) - p.coords[i] * p.coords[j] / (4.0 * zsq)) / (n + 1.0));
  return s;
}

SymMatrix sigma_cauchy_a_printed(int n) {
  const PeakVector p = peak_vector(RootSystem::A, n);
  const double zsq = p.norm_sq();
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      const double dual = sigma_closed_entry(p.coords, n, i, j);
      s.set(i, j, sign * (dual - p.coords[i] * p.coords[j] / (4.0 * zsq)) / (n + 1.0));
    }
  return s;
}

std::vector<double> rescale(std::span<const double> y, double k, const PeakVector& peak,
                            RescaleDirection direction) {
  if (!(k >= 1.0)) throw std::invalid_argument("rescale: requires k >= 1");
  if (y.size() != peak.coords.size()) throw std::invalid_argument("rescale: size mismatch");
  const double coeff =
      direction == RescaleDirection::Forward ? 1.0 / std::sqrt(k) - 1.0 : std::sqrt(k) - 1.0;
  const double c = coeff * dot(y, peak.coords) / peak.norm_sq();
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * peak.coords[i];
  return out;
}

LimitLaw limit_law(LimitSystem system, int n, double nu) {
  LimitLaw law;
  law.system = system;
  law.n = n;
  law.nu = nu;
  switch (system) {
    case LimitSystem::A:
      if (n < 2) throw std::invalid_argument("limit_law: A requires n >= 2");
      law.peak = peak_vector(RootSystem::A, n);
      law.bessel_cov = frozen_covariance(RootSystem::A, Flavor::Bessel, n);
      law.mean_scale = 2.0;
      break;
    case LimitSystem::B:
      law.peak = peak_vector(RootSystem::B, n, nu);
      law.bessel_cov = frozen_covariance(RootSystem::B, Flavor::Bessel, n, nu);
      law.mean_scale = 1.0;
      break;
    default:  // D and BOneSided share the D peak and covariance
      if (n < 2) throw std::invalid_argument("limit_law: requires n >= 2");
      law.peak = peak_vector(RootSystem::D, n);
      law.bessel_cov = frozen_covariance(RootSystem::D, Flavor::Bessel, n);
      law.mean_scale = 1.0;
      break;
  }
  law.peak_norm_sq = law.peak.norm_sq();

  law.projection_perp = SymMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double pij = -law.peak.coords[i] * law.peak.coords[j] / law.peak_norm_sq;
      law.projection_perp.set(i, j, (i == j) ? 1.0 + pij : pij);
    }

  // A Sigma A via two projections.
  SymMatrix asa(n);
  {
    Matrix tmp(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += law.projection_perp(i, l) * law.bessel_cov.sigma(l, j);
        tmp(i, j) = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += tmp(i, l) * law.projection_perp(l, j);
        asa.set(i, j, s);
      }
  }
  law.perp_factor = cholesky(asa);

  // Rayleigh quotient: the peak is an eigenvector of sigma_inv.
  law.peak_eigenvalue =
      dot(matvec(law.bessel_cov.sigma_inv, law.peak.coords), law.peak.coords) / law.peak_norm_sq;

  // Closed-form constant: 2 Q^(N/2) sqrt(prod of perp eigenvalues) e^(lambda1 Q / 2) / (2 pi)^(N/2),
  // with Q = mean_scale * ||peak||^2; doubled on the one-sided quarter space.
  const double q = law.mean_scale * law.peak_norm_sq;
  double sum_log_perp = 0.0;
  {
    // Drop the one eigenvalue belonging to the peak direction.
    std::size_t drop = 0;
    double best = std::abs(law.bessel_cov.eigen.values[0] - law.peak_eigenvalue);
    for (std::size_t i = 1; i < law.bessel_cov.eigen.values.size(); ++i) {
      const double d = std::abs(law.bessel_cov.eigen.values[i] - law.peak_eigenvalue);
      if (d < best) {
        best = d;
        drop = i;
      }
    }
    for (std::size_t i = 0; i < law.bessel_cov.eigen.values.size(); ++i)
      if (i != drop) sum_log_perp += std::log(law.bessel_cov.eigen.values[i]);
  }
  law.log_norm = std::log(2.0) + 0.5 * n * std::log(q) + 0.5 * sum_log_perp +
                 0.5 * law.peak_eigenvalue * q - 0.5 * n * std::log(2.0 * kPi);
  if (system == LimitSystem::BOneSided) law.log_norm += std::log(2.0);
  return law;
}

bool limit_support_contains(const LimitLaw& law, std::span<const double> y) {
  if (static_cast<int>(y.size()) != law.n)
    throw std::invalid_argument("limit_support_contains: size mismatch");
  if (!(dot(y, law.peak.coords) > 0.0)) return false;
  if (law.system == LimitSystem::BOneSided && !(y[law.n - 1] > 0.0)) return false;
  return true;
}

double limit_log_density(const LimitLaw& law, std::span<const double> y) {
  if (!limit_support_contains(law, y))
    throw std::domain_error("limit_log_density: point outside the open support half-space");
  const double u1 = dot(y, law.peak.coords) / std::sqrt(law.peak_norm_sq);
  const double q = law.mean_scale * law.peak_norm_sq;
  const double quad = dot(matvec(law.bessel_cov.sigma_inv, y), y);
  return law.log_norm - 0.5 * q * (quad + 1.0) / (u1 * u1) - (law.n + 1.0) * std::log(u1);
}

double limit_density(const LimitLaw& law, std::span<const double> y) {
  return std::exp(limit_log_density(law, y));
}

double ratio_constant_a(int n, double k, std::span<const double> x) {
  if (n < 2) throw std::invalid_argument("ratio_constant_a: requires n >= 2");
  const EnsembleLaw law = make_law(multiplicity_a(n, k), Flavor::Cauchy, std::sqrt(2.0));
  const std::vector<double> m = mode_a(n, k);
  std::vector<double> shifted(x.begin(), x.end());
  for (int i = 0; i < n; ++i) shifted[i] += m[i];
  const double log_fk = log_density(law, shifted);

  const FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Cauchy, n);
  double log_det_sigma = 0.0;  // ln det Sigma_Cauchy = -sum ln eig(sigma_inv)
  for (double v : fc.eigen.values) log_det_sigma -= std::log(v);
  const double quad = dot(matvec(fc.sigma_inv, x), x);
  const double log_gauss = -0.5 * n * std::log(2.0 * kPi) - 0.5 * log_det_sigma - 0.5 * quad;

  const double log_scale =
      0.5 * std::log(k * n * (n - 1.0) / (n + 1.0)) + 0.5 * (n + 1.0);
  return std::exp(log_fk - log_gauss + log_scale);
}

}  // namespace freezelab
