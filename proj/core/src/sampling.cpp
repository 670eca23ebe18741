#include "freezelab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "freezelab/linalg.hpp"
#include "freezelab/specfun.hpp"

namespace freezelab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;
const double kSqrt2 = std::sqrt(2.0);
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kChunkRows = 8192;

double nonzero_normal(RngStream& rng) {
  double z;
  do {
    z = rng.normal();
  } while (z == 0.0);
  return z;
}

}  // namespace

double sample_subordinator(RngStream& rng, double t) {
  if (!(t > 0.0)) throw std::domain_error("sample_subordinator: t must be positive");
  const double z = nonzero_normal(rng);
  return t * t / (2.0 * z * z);
}

double subordinator_density(double t, double s) {
  if (!(t > 0.0)) throw std::domain_error("subordinator_density: t must be positive");
  if (s <= 0.0) return 0.0;
  return t / (2.0 * std::sqrt(kPi)) * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s));
}

double subordinator_cdf(double t, double s) {
  if (!(t > 0.0)) throw std::domain_error("subordinator_cdf: t must be positive");
  if (s <= 0.0) return 0.0;
  return erfc(t / (2.0 * std::sqrt(s)));
}

namespace {

std::vector<double> bessel_a_draw(RngStream& rng, int n, double k, double t) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, kSqrt2 * rng.normal());
  for (int i = 0; i + 1 < n; ++i) m.set(i, i + 1, rng.chi(2.0 * k * (n - 1 - i)));
  const EigenDecomp eig = eigh(m);
  const double scale = std::sqrt(t) / kSqrt2;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = scale * eig.values[n - 1 - i];
  return y;
}

std::vector<double> bessel_b_draw(RngStream& rng, int n, double k1, double k2, double t) {
  std::vector<double> diag(n), sub(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) diag[i] = rng.chi(2.0 * k1 + 1.0 + 2.0 * k2 * (n - 1 - i));
  for (int i = 0; i + 1 < n; ++i) sub[i] = rng.chi(2.0 * k2 * (n - 1 - i));
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    double d = diag[i] * diag[i];
    if (i > 0) d += sub[i - 1] * sub[i - 1];
    m.set(i, i, d);
  }
  for (int i = 0; i + 1 < n; ++i) m.set(i, i + 1, diag[i] * sub[i]);
  const EigenDecomp eig = eigh(m);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = std::sqrt(t * std::max(0.0, eig.values[n - 1 - i]));
  return y;
}

}  // namespace

std::vector<double> sample_bessel_ensemble(RngStream& rng, const MultiplicitySpec& spec,
                                           double t) {
  if (!(t > 0.0)) throw std::domain_error("sample_bessel_ensemble: t must be positive");
  switch (spec.system) {
    case RootSystem::A:
      return bessel_a_draw(rng, spec.n, spec.k(), t);
    case RootSystem::B:
      return bessel_b_draw(rng, spec.n, spec.k1, spec.k2, t);
    case RootSystem::D: {
      std::vector<double> y = bessel_b_draw(rng, spec.n, 0.0, spec.k(), t);
      if (rng.uniform() < 0.5) y[spec.n - 1] = -y[spec.n - 1];
      return y;
    }
  }
  throw std::logic_error("sample_bessel_ensemble: unknown root system");
}

std::vector<double> sample_cauchy_bessel(RngStream& rng, const MultiplicitySpec& spec,
                                         double t) {
  if (!(t > 0.0)) throw std::domain_error("sample_cauchy_bessel: t must be positive");
  const double s = sample_subordinator(rng, t);
  return sample_bessel_ensemble(rng, spec, s);
}

std::vector<double> sample_limit(RngStream& rng, const LimitLaw& law) {
  const int n = law.n;
  const double s = sample_subordinator(rng, kSqrt2);
  std::vector<double> g(n);
  for (auto& v : g) v = rng.normal();
  const std::vector<double> noise = matvec(law.perp_factor, g);
  const double mean_coeff = std::sqrt(law.mean_scale * s);
  const double noise_coeff = std::sqrt(s);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i)
    y[i] = mean_coeff * law.peak.coords[i] + noise_coeff * noise[i];
  if (law.system == LimitSystem::BOneSided) y[n - 1] = std::abs(y[n - 1]);
  return y;
}

std::string LawSpec::name() const {
  if (kind == Kind::Ensemble) {
    std::string prefix = flavor == Flavor::Bessel ? "bessel-" : "cauchy-";
    switch (mult.system) {
      case RootSystem::A:
        return prefix + "a";
      case RootSystem::B:
        return prefix + "b";
      case RootSystem::D:
        return prefix + "d";
    }
    throw std::logic_error("LawSpec::name: unknown root system");
  }
  switch (limit_system) {
    case LimitSystem::A:
      return "limit-a";
    case LimitSystem::B:
      return "limit-b";
    case LimitSystem::D:
      return "limit-d";
    case LimitSystem::BOneSided:
      return "limit-b-one-sided";
  }
  throw std::logic_error("LawSpec::name: unknown limit system");
}

int LawSpec::dim() const { return kind == Kind::Ensemble ? mult.n : limit_n; }

LawSpec ensemble_law_spec(const MultiplicitySpec& mult, Flavor flavor, double t) {
  LawSpec spec;
  spec.kind = LawSpec::Kind::Ensemble;
  spec.mult = mult;
  spec.flavor = flavor;
  spec.t = t;
  return spec;
}

LawSpec limit_law_spec(LimitSystem system, int n, double nu) {
  LawSpec spec;
  spec.kind = LawSpec::Kind::Limit;
  spec.limit_system = system;
  spec.limit_n = n;
  spec.limit_nu = nu;
  return spec;
}

nlohmann::ordered_json law_descriptor(const LawSpec& law) {
  nlohmann::ordered_json j;
  j["law"] = law.name();
  if (law.kind == LawSpec::Kind::Ensemble) {
    j["system"] = to_string(law.mult.system);
    j["flavor"] = to_string(law.flavor);
    j["n"] = law.mult.n;
    if (law.mult.system == RootSystem::B) {
      j["k1"] = law.mult.k1;
      j["k2"] = law.mult.k2;
    } else {
      j["k"] = law.mult.k();
    }
    j["t"] = law.t;
  } else {
    j["system"] = to_string(law.limit_system);
    j["n"] = law.limit_n;
    if (law.limit_system == LimitSystem::B) j["nu"] = law.limit_nu;
  }
  return j;
}

std::function<double(const std::vector<double>&)> make_log_density(const LawSpec& spec) {
  if (spec.kind == LawSpec::Kind::Ensemble) {
    const EnsembleLaw law = make_law(spec.mult, spec.flavor, spec.t);
    const MultiplicitySpec mult = spec.mult;
    return [law, mult](const std::vector<double>& y) {
      if (!chamber_contains(mult.system, mult.n, y)) return kNegInf;
      return log_density(law, y);
    };
  }
  const LimitLaw law = limit_law(spec.limit_system, spec.limit_n, spec.limit_nu);
  return [law](const std::vector<double>& y) {
    if (!limit_support_contains(law, y)) return kNegInf;
    return limit_log_density(law, y);
  };
}

namespace {

// Isotropic multivariate t with one degree of freedom (scale sigma): same
// power tail as the Cauchy-flavor and limit densities, so importance weights
// against those targets stay bounded.
std::vector<double> draw_t1_iso(RngStream& rng, double sigma, int n) {
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal();
  const double f = sigma / std::abs(nonzero_normal(rng));
  for (auto& v : y) v *= f;
  return y;
}

double log_t1_iso(const std::vector<double>& y, double sigma, int n) {
  double q = 0.0;
  for (double v : y) q += (v / sigma) * (v / sigma);
  return log_gamma(0.5 * (n + 1.0)) - log_gamma(0.5) - 0.5 * n * std::log(kPi) -
         n * std::log(sigma) - 0.5 * (n + 1.0) * std::log1p(q);
}

std::vector<double> draw_gauss_iso(RngStream& rng, double sigma, int n) {
  std::vector<double> y(n);
  for (auto& v : y) v = sigma * rng.normal();
  return y;
}

double log_gauss_iso(const std::vector<double>& y, double sigma, int n) {
  double q = 0.0;
  for (double v : y) q += v * v;
  return -0.5 * n * std::log(2.0 * kPi * sigma * sigma) - 0.5 * q / (sigma * sigma);
}

// Map a point to its reflection-group orbit representative in the open
// chamber. The proposals above are invariant under the full group, so the
// folded density is the isotropic one times the orbit size.
void fold_chamber(RootSystem system, std::vector<double>& y) {
  switch (system) {
    case RootSystem::A:
      std::sort(y.begin(), y.end(), std::greater<double>());
      return;
    case RootSystem::B:
      for (auto& v : y) v = std::abs(v);
      std::sort(y.begin(), y.end(), std::greater<double>());
      return;
    case RootSystem::D: {
      double sign = 1.0;
      for (auto& v : y) {
        if (v < 0.0) {
          sign = -sign;
          v = -v;
        }
      }
      std::sort(y.begin(), y.end(), std::greater<double>());
      y.back() *= sign;
      return;
    }
  }
}

double log_fold_factor(RootSystem system, int n) {
  double lf = log_gamma(n + 1.0);
  if (system == RootSystem::B) lf += n * kLn2;
  if (system == RootSystem::D) lf += (n - 1.0) * kLn2;
  return lf;
}

}  // namespace

Proposal make_proposal(const LawSpec& spec) {
  Proposal p;
  if (spec.kind == LawSpec::Kind::Ensemble) {
    const MultiplicitySpec mult = spec.mult;
    const int n = mult.n;
    const double spread = std::sqrt(1.0 + 2.0 * mult.gamma() / n);
    const double lf = log_fold_factor(mult.system, n);
    if (spec.flavor == Flavor::Bessel) {
      const double sigma = std::sqrt(spec.t) * spread;
      p.draw = [mult, sigma, n](RngStream& rng) {
        std::vector<double> y = draw_gauss_iso(rng, sigma, n);
        fold_chamber(mult.system, y);
        return y;
      };
      p.log_density = [sigma, n, lf](const std::vector<double>& y) {
        return lf + log_gauss_iso(y, sigma, n);
      };
    } else {
      const double sigma = spec.t * spread;
      p.draw = [mult, sigma, n](RngStream& rng) {
        std::vector<double> y = draw_t1_iso(rng, sigma, n);
        fold_chamber(mult.system, y);
        return y;
      };
      p.log_density = [sigma, n, lf](const std::vector<double>& y) {
        return lf + log_t1_iso(y, sigma, n);
      };
    }
    return p;
  }

  const LimitLaw law = limit_law(spec.limit_system, spec.limit_n, spec.limit_nu);
  const int n = law.n;
  const double sigma = std::sqrt(law.mean_scale * law.peak_norm_sq / (3.0 * n));
  const bool one_sided = law.system == LimitSystem::BOneSided;
  const std::vector<double> peak = law.peak.coords;
  const double lf = one_sided ? 2.0 * kLn2 : kLn2;
  p.draw = [peak, sigma, n, one_sided](RngStream& rng) {
    std::vector<double> y = draw_t1_iso(rng, sigma, n);
    if (dot(y, peak) < 0.0)
      for (auto& v : y) v = -v;
    if (one_sided) y[n - 1] = std::abs(y[n - 1]);
    return y;
  };
  p.log_density = [sigma, n, lf](const std::vector<double>& y) {
    return lf + log_t1_iso(y, sigma, n);
  };
  return p;
}

SampleBatch sample_batch(const LawSpec& law, std::size_t count, std::uint64_t seed,
                         std::uint64_t stream) {
  if (stream >= (std::uint64_t{1} << 44))
    throw std::domain_error("sample_batch: stream id must be below 2^44");
  SampleBatch batch;
  batch.descriptor = law_descriptor(law);
  batch.dim = law.dim();
  batch.count = count;
  batch.seed = seed;
  batch.stream = stream;
  batch.data.resize(count * static_cast<std::size_t>(batch.dim));

  std::optional<LimitLaw> lim;
  if (law.kind == LawSpec::Kind::Limit)
    lim.emplace(limit_law(law.limit_system, law.limit_n, law.limit_nu));
  else
    make_law(law.mult, law.flavor, law.t);  // surfaces invalid parameters before drawing

  const std::size_t chunks = count == 0 ? 0 : (count - 1) / kChunkRows + 1;
  for (std::size_t c = 0; c < chunks; ++c) {
    RngStream rng(seed, (stream << 20) + c);
    const std::size_t lo = c * kChunkRows;
    const std::size_t hi = std::min(count, lo + kChunkRows);
    for (std::size_t i = lo; i < hi; ++i) {
      std::vector<double> y;
      if (lim)
        y = sample_limit(rng, *lim);
      else if (law.flavor == Flavor::Bessel)
        y = sample_bessel_ensemble(rng, law.mult, law.t);
      else
        y = sample_cauchy_bessel(rng, law.mult, law.t);
      std::copy(y.begin(), y.end(), batch.data.begin() + i * batch.dim);
    }
  }
  return batch;
}

}  // namespace freezelab
