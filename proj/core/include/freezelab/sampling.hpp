#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "freezelab/ensembles.hpp"
#include "freezelab/freezing.hpp"
#include "freezelab/rng.hpp"
#include "json.hpp"

namespace freezelab {

// One draw from the time-change subordinator at parameter t > 0:
// S = t^2 / (2 Z^2) with Z standard normal.
double sample_subordinator(RngStream& rng, double t);

// Density t / (2 sqrt(pi)) s^(-3/2) exp(-t^2 / (4 s)) on s > 0.
double subordinator_density(double t, double s);

// P(S <= s) = erfc(t / (2 sqrt(s))).
double subordinator_cdf(double t, double s);

// One draw from the Bessel flavor at time t, returned in descending chamber
// order. Tridiagonal model for A, bidiagonal squared for B; D reuses the B
// route with a fair sign flip on the smallest coordinate.
std::vector<double> sample_bessel_ensemble(RngStream& rng, const MultiplicitySpec& spec,
                                           double t);

// Cauchy flavor at time t: Bessel flavor run at a subordinated time.
std::vector<double> sample_cauchy_bessel(RngStream& rng, const MultiplicitySpec& spec,
                                         double t);

// One draw from a half-space limit law: S from the subordinator at sqrt(2),
// then sqrt(mean_scale * S) * peak + sqrt(S) * perp_factor * g with g standard
// normal. The one-sided B variant folds the last coordinate positive.
std::vector<double> sample_limit(RngStream& rng, const LimitLaw& law);

// A sampleable distribution: either an ensemble flavor at a fixed time or a
// half-space limit law.
struct LawSpec {
  enum class Kind { Ensemble, Limit };
  Kind kind = Kind::Ensemble;

  MultiplicitySpec mult;  // Ensemble only
  Flavor flavor = Flavor::Bessel;
  double t = 1.0;

  LimitSystem limit_system = LimitSystem::A;  // Limit only
  int limit_n = 0;
  double limit_nu = 0.0;

  std::string name() const;  // e.g. "cauchy-a", "limit-b-one-sided"
  int dim() const;
};

LawSpec ensemble_law_spec(const MultiplicitySpec& mult, Flavor flavor, double t);
LawSpec limit_law_spec(LimitSystem system, int n, double nu = 0.0);

// Parameters of the law as an ordered JSON object (echoed into output headers).
nlohmann::ordered_json law_descriptor(const LawSpec& law);

// Log density of the law with the support check folded in: points outside the
// open support yield -infinity instead of throwing.
std::function<double(const std::vector<double>&)> make_log_density(const LawSpec& law);

// Importance-sampling proposal: draw plus the log density of the draw's law.
struct Proposal {
  std::function<std::vector<double>(RngStream&)> draw;
  std::function<double(const std::vector<double>&)> log_density;
};

// Proposal matched to the law's support and tail: iid Gaussian folded into the
// chamber for Bessel flavors; isotropic Cauchy (multivariate t, one degree of
// freedom) folded into the chamber or half space for Cauchy flavors and limit
// laws, whose tails decay at the same power.
Proposal make_proposal(const LawSpec& law);

struct SampleBatch {
  nlohmann::ordered_json descriptor;
  int dim = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<double> data;  // row-major, count x dim

  const double* row(std::size_t i) const { return data.data() + i * dim; }
};

// Draw `count` samples deterministically. Rows are generated in chunks of
// 8192; chunk c is produced by RngStream(seed, (stream << 20) + c), so any
// prefix of the batch is independent of the total count.
SampleBatch sample_batch(const LawSpec& law, std::size_t count, std::uint64_t seed,
                         std::uint64_t stream);

}  // namespace freezelab
