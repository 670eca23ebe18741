#include "freezelab/ensembles.hpp"

#include <cmath>
#include <stdexcept>

#include "freezelab/linalg.hpp"
#include "freezelab/orthopoly.hpp"
#include "freezelab/specfun.hpp"

namespace freezelab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

void check_n(int n) {
  if (n < 1 || n > 200) throw std::invalid_argument("dimension out of range [1, 200]");
}

}  // namespace

std::string to_string(RootSystem s) {
  switch (s) {
    case RootSystem::A: return "A";
    case RootSystem::B: return "B";
    default: return "D";
  }
}

std::string to_string(Flavor f) { return f == Flavor::Bessel ? "bessel" : "cauchy"; }

double MultiplicitySpec::k() const {
  if (system == RootSystem::B) throw std::logic_error("k(): B carries a pair (k1, k2)");
  return k1;
}

double MultiplicitySpec::nu() const {
  if (system != RootSystem::B || !(k2 > 0.0))
    throw std::logic_error("nu(): requires system B with k2 > 0");
  return k1 / k2;
}

double MultiplicitySpec::gamma() const {
  switch (system) {
    case RootSystem::A: return k1 * n * (n - 1.0) / 2.0;
    case RootSystem::B: return k2 * n * (n - 1.0) + k1 * n;
    default: return k1 * n * (n - 1.0);
  }
}

MultiplicitySpec multiplicity_a(int n, double k) {
  check_n(n);
  if (!(k > 0.0)) throw std::invalid_argument("multiplicity_a: requires k > 0");
  return {RootSystem::A, n, k, 0.0};
}

MultiplicitySpec multiplicity_b(int n, double k1, double k2) {
  check_n(n);
  if (k1 < 0.0 || k2 < 0.0 || (k1 == 0.0 && k2 == 0.0))
    throw std::invalid_argument("multiplicity_b: requires k1, k2 >= 0, not both zero");
  return {RootSystem::B, n, k1, k2};
}

MultiplicitySpec multiplicity_b_nu_beta(int n, double nu, double beta) {
  if (!(nu > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("multiplicity_b_nu_beta: requires nu > 0 and beta > 0");
  return multiplicity_b(n, nu * beta, beta);
}

MultiplicitySpec multiplicity_d(int n, double k) {
  check_n(n);
  if (!(k > 0.0)) throw std::invalid_argument("multiplicity_d: requires k > 0");
  return {RootSystem::D, n, k, 0.0};
}

bool chamber_contains(RootSystem system, int n, std::span<const double> y) {
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("chamber_contains: size mismatch");
  switch (system) {
    case RootSystem::A:
      for (int i = 0; i + 1 < n; ++i)
        if (!(y[i] > y[i + 1])) return false;
      return true;
    case RootSystem::B:
      for (int i = 0; i + 1 < n; ++i)
        if (!(y[i] > y[i + 1])) return false;
      return y[n - 1] > 0.0;
    default:
      for (int i = 0; i + 2 < n; ++i)
        if (!(y[i] > y[i + 1])) return false;
      if (n >= 2 && !(y[n - 2] > std::abs(y[n - 1]))) return false;
      return true;
  }
}

double log_weight(const MultiplicitySpec& spec, std::span<const double> y) {
  const int n = spec.n;
  if (!chamber_contains(spec.system, n, y))
    throw std::domain_error("log_weight: point outside the open chamber");
  double lw = 0.0;
  switch (spec.system) {
    case RootSystem::A:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) lw += 2.0 * spec.k1 * std::log(y[i] - y[j]);
      return lw;
    case RootSystem::B:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          lw += 2.0 * spec.k2 * std::log(y[i] * y[i] - y[j] * y[j]);
      for (int i = 0; i < n; ++i) lw += 2.0 * spec.k1 * std::log(y[i]);
      return lw;
    default:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          lw += 2.0 * spec.k1 * std::log(y[i] * y[i] - y[j] * y[j]);
      return lw;
  }
}

double log_selberg_const(const MultiplicitySpec& spec) {
  const int n = spec.n;
  double ln = log_gamma(n + 1.0);
  switch (spec.system) {
    case RootSystem::A:
      ln -= 0.5 * n * std::log(2.0 * kPi);
      for (int j = 1; j <= n; ++j) ln += log_gamma(1.0 + spec.k1) - log_gamma(1.0 + j * spec.k1);
      return ln;
    case RootSystem::B:
      ln -= n * (spec.k1 + (n - 1.0) * spec.k2 - 0.5) * kLn2;
      for (int j = 1; j <= n; ++j)
        ln += log_gamma(1.0 + spec.k2) - log_gamma(1.0 + j * spec.k2) -
              log_gamma(0.5 + spec.k1 + (j - 1.0) * spec.k2);
      return ln;
    default:
      ln -= (n * (n - 1.0) * spec.k1 - 0.5 * n + 1.0) * kLn2;
      for (int j = 1; j <= n; ++j)
        ln += log_gamma(1.0 + spec.k1) - log_gamma(1.0 + j * spec.k1) -
              log_gamma(0.5 + (j - 1.0) * spec.k1);
      return ln;
  }
}

double log_cauchy_norm_printed(const MultiplicitySpec& spec) {
  const int n = spec.n;
  const double gamma = spec.gamma();
  const double expo = gamma + 0.5 * (n + 1.0);
  double ln = log_gamma(n + 1.0) + log_gamma(expo);
  switch (spec.system) {
    case RootSystem::A:
      ln += gamma * kLn2 - 0.5 * (n + 1.0) * std::log(kPi);
      for (int j = 1; j <= n; ++j) ln += log_gamma(1.0 + spec.k1) - log_gamma(1.0 + j * spec.k1);
      return ln;
    case RootSystem::B:
      ln += n * kLn2 - 0.5 * std::log(kPi);
      for (int j = 1; j <= n; ++j)
        ln += log_gamma(1.0 + spec.k2) - log_gamma(1.0 + j * spec.k2) -
              log_gamma(0.5 + spec.k1 + (j - 1.0) * spec.k2);
      return ln;
    default:
      ln += (n - 1.0) * kLn2 - 0.5 * std::log(kPi);
      for (int j = 1; j <= n; ++j)
        ln += log_gamma(1.0 + spec.k1) - log_gamma(1.0 + j * spec.k1) -
              log_gamma(0.5 + (j - 1.0) * spec.k1);
      return ln;
  }
}

EnsembleLaw make_law(const MultiplicitySpec& spec, Flavor flavor, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("make_law: requires t > 0");
  EnsembleLaw law;
  law.spec = spec;
  law.flavor = flavor;
  law.t = t;
  law.gamma = spec.gamma();
  const double lnc = log_selberg_const(spec);
  if (flavor == Flavor::Bessel) {
    law.log_norm = lnc - (law.gamma + 0.5 * spec.n) * std::log(t);
  } else {
    const double expo = law.gamma + 0.5 * (spec.n + 1.0);
    law.log_norm = lnc + std::log(t) + log_gamma(expo) - 0.5 * std::log(4.0 * kPi) +
                   expo * std::log(4.0);
  }
  return law;
}

double log_density(const EnsembleLaw& law, std::span<const double> y) {
  const double lw = log_weight(law.spec, y);  // validates the chamber
  const double nsq = norm_sq(y);
  if (law.flavor == Flavor::Bessel) return law.log_norm - nsq / (2.0 * law.t) + lw;
  const double expo = law.gamma + 0.5 * (law.spec.n + 1.0);
  return law.log_norm - expo * std::log(law.t * law.t + 2.0 * nsq) + lw;
}

std::vector<double> mode_a(int n, double k) {
  check_n(n);
  if (!(k > 0.0)) throw std::invalid_argument("mode_a: requires k > 0");
  const ZeroSet zs = hermite_zeros(n);
  const double c = std::sqrt(2.0 * k / (n + 1.0));
  std::vector<double> m(zs.zeros.size());
  for (int i = 0; i < n; ++i) m[i] = c * zs.zeros[n - 1 - i];  // descending
  return m;
}

double cog_marginal_cdf(double x) { return 0.5 + std::atan(x) / kPi; }

}  // namespace freezelab
