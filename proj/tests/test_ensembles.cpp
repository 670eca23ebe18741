#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "freezelab/ensembles.hpp"
#include "freezelab/orthopoly.hpp"
#include "freezelab/specfun.hpp"

using namespace freezelab;

namespace {
const double kPi = std::acos(-1.0);
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("multiplicity constructors and gamma exponents") {
  const MultiplicitySpec a = multiplicity_a(4, 1.5);
  CHECK(a.k() == 1.5);
  CHECK(a.gamma() == doctest::Approx(1.5 * 4 * 3 / 2.0));

  const MultiplicitySpec b = multiplicity_b(3, 4.0, 2.0);
  CHECK(b.nu() == doctest::Approx(2.0));
  CHECK(b.gamma() == doctest::Approx(2.0 * 3 * 2 + 4.0 * 3));
  const MultiplicitySpec b2 = multiplicity_b_nu_beta(3, 2.0, 2.0);
  CHECK(b2.k1 == doctest::Approx(4.0));
  CHECK(b2.k2 == doctest::Approx(2.0));

  const MultiplicitySpec d = multiplicity_d(3, 0.7);
  CHECK(d.gamma() == doctest::Approx(0.7 * 3 * 2));

  CHECK_THROWS_AS(multiplicity_a(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity_a(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity_b(2, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity_b(2, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity_b_nu_beta(2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity_d(2, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(a.nu(), std::logic_error);
  CHECK_THROWS_AS(b.k(), std::logic_error);
}

TEST_CASE("chamber membership") {
  CHECK(chamber_contains(RootSystem::A, 3, std::vector<double>{2.0, 0.0, -1.0}));
  CHECK(!chamber_contains(RootSystem::A, 3, std::vector<double>{2.0, 2.0, -1.0}));
  CHECK(chamber_contains(RootSystem::A, 1, std::vector<double>{-5.0}));

  CHECK(chamber_contains(RootSystem::B, 2, std::vector<double>{2.0, 1.0}));
  CHECK(!chamber_contains(RootSystem::B, 2, std::vector<double>{2.0, 0.0}));
  CHECK(!chamber_contains(RootSystem::B, 2, std::vector<double>{2.0, -1.0}));

  CHECK(chamber_contains(RootSystem::D, 2, std::vector<double>{2.0, -1.0}));
  CHECK(chamber_contains(RootSystem::D, 2, std::vector<double>{2.0, 1.0}));
  CHECK(!chamber_contains(RootSystem::D, 2, std::vector<double>{1.0, -2.0}));
  CHECK(chamber_contains(RootSystem::D, 1, std::vector<double>{-3.0}));

  CHECK_THROWS_AS(chamber_contains(RootSystem::A, 2, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("log_weight closed forms") {
  const std::vector<double> y = {1.0, -1.0};
  CHECK(log_weight(multiplicity_a(2, 1.0), y) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(log_weight(multiplicity_a(2, 3.0), y) ==
        doctest::Approx(3.0 * std::log(4.0)).epsilon(1e-15));

  const std::vector<double> yb = {2.0, 1.0};
  // B: (y1^2 - y2^2)^(2 k2) * (y1 y2)^(2 k1).
  CHECK(log_weight(multiplicity_b(2, 1.5, 0.5), yb) ==
        doctest::Approx(std::log(3.0) + 3.0 * std::log(2.0)).epsilon(1e-14));

  const std::vector<double> yd = {2.0, -1.0};
  CHECK(log_weight(multiplicity_d(2, 2.0), yd) ==
        doctest::Approx(4.0 * std::log(3.0)).epsilon(1e-14));

  CHECK_THROWS_AS(log_weight(multiplicity_a(2, 1.0), std::vector<double>{-1.0, 1.0}),
                  std::domain_error);
}

TEST_CASE("bessel flavor normalization in one dimension") {
  // A, N = 1: plain Gaussian.
  for (double t : {0.5, 1.0, 3.0}) {
    const EnsembleLaw law = make_law(multiplicity_a(1, 2.0), Flavor::Bessel, t);
    CHECK(law.log_norm == doctest::Approx(-0.5 * std::log(2.0 * kPi * t)).epsilon(1e-14));
    const double y = 0.8;
    CHECK(log_density(law, std::vector<double>{y}) ==
          doctest::Approx(-0.5 * std::log(2.0 * kPi * t) - y * y / (2.0 * t)).epsilon(1e-14));
  }
  // B, N = 1: y^(2 k1) e^(-y^2 / 2t) on y > 0, constant 2 / ((2t)^(k1 + 1/2) Gamma(k1 + 1/2)).
  for (double k1 : {0.5, 2.0})
    for (double t : {1.0, 2.0}) {
      const EnsembleLaw law = make_law(multiplicity_b(1, k1, 0.0), Flavor::Bessel, t);
      const double target =
          std::log(2.0) - (k1 + 0.5) * std::log(2.0 * t) - log_gamma(k1 + 0.5);
      CHECK(law.log_norm == doctest::Approx(target).epsilon(1e-13));
    }
}

TEST_CASE("bessel density at a pinned two-particle point") {
  // Chamber integral of e^(-|y|^2/2) (y1 - y2)^2 is 2 pi.
  const EnsembleLaw law = make_law(multiplicity_a(2, 1.0), Flavor::Bessel, 1.0);
  CHECK(log_density(law, std::vector<double>{1.0, -1.0}) ==
        doctest::Approx(std::log(4.0) - 1.0 - std::log(2.0 * kPi)).epsilon(1e-13));
}

TEST_CASE("cauchy density at the pinned two-particle point") {
  const EnsembleLaw law = make_law(multiplicity_a(2, 1.0), Flavor::Cauchy, kSqrt2);
  CHECK(log_density(law, std::vector<double>{1.0, -1.0}) ==
        doctest::Approx(std::log(3.0 / (2.0 * kPi)) + std::log(4.0) - 2.5 * std::log(3.0))
            .epsilon(1e-13));
}

TEST_CASE("printed cauchy constants at pinned parameters") {
  // A, N = 2, k = 1: 3 / (2 pi).
  CHECK(log_cauchy_norm_printed(multiplicity_a(2, 1.0)) ==
        doctest::Approx(std::log(3.0 / (2.0 * kPi))).epsilon(1e-13));
  // B, N = 1: 2 Gamma(k1 + 1) / (sqrt(pi) Gamma(k1 + 1/2)).
  for (double k1 : {0.5, 1.0, 3.5}) {
    const double target =
        std::log(2.0) + log_gamma(k1 + 1.0) - 0.5 * std::log(kPi) - log_gamma(k1 + 0.5);
    CHECK(log_cauchy_norm_printed(multiplicity_b(1, k1, 0.0)) ==
          doctest::Approx(target).epsilon(1e-13));
  }
  // D, N = 1: 1 / pi (the standard Cauchy).
  CHECK(log_cauchy_norm_printed(multiplicity_d(1, 1.0)) ==
        doctest::Approx(-std::log(kPi)).epsilon(1e-13));
}

TEST_CASE("general cauchy constant agrees with the printed route at t = sqrt(2)") {
  std::vector<MultiplicitySpec> specs = {
      multiplicity_a(1, 2.0),  multiplicity_a(2, 1.0),  multiplicity_a(3, 0.5),
      multiplicity_a(4, 5.0),  multiplicity_b(1, 2.0, 0.0), multiplicity_b(2, 1.0, 0.5),
      multiplicity_b(3, 2.0, 1.0), multiplicity_b_nu_beta(2, 2.0, 3.0), multiplicity_d(1, 1.0),
      multiplicity_d(2, 1.5),  multiplicity_d(3, 2.0)};
  for (const MultiplicitySpec& ms : specs) {
    const EnsembleLaw law = make_law(ms, Flavor::Cauchy, kSqrt2);
    const double e = ms.gamma() + (ms.n + 1.0) / 2.0;
    CHECK(law.log_norm ==
          doctest::Approx(log_cauchy_norm_printed(ms) + e * std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("normalization constants scale in t as the densities demand") {
  const MultiplicitySpec ms = multiplicity_b(3, 1.0, 2.0);
  const EnsembleLaw bessel1 = make_law(ms, Flavor::Bessel, 1.0);
  const EnsembleLaw cauchy0 = make_law(ms, Flavor::Cauchy, kSqrt2);
  for (double t : {0.3, 1.0, 2.5, 7.0}) {
    const EnsembleLaw bessel = make_law(ms, Flavor::Bessel, t);
    CHECK(bessel.log_norm ==
          doctest::Approx(bessel1.log_norm - (ms.gamma() + ms.n / 2.0) * std::log(t))
              .epsilon(1e-12));
    const EnsembleLaw cauchy = make_law(ms, Flavor::Cauchy, t);
    CHECK(cauchy.log_norm ==
          doctest::Approx(cauchy0.log_norm + std::log(t / kSqrt2)).epsilon(1e-12));
  }
}

TEST_CASE("log_density rejects points off the chamber") {
  const EnsembleLaw law = make_law(multiplicity_b(2, 1.0, 1.0), Flavor::Cauchy, 1.0);
  CHECK_THROWS_AS(log_density(law, std::vector<double>{1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(log_density(law, std::vector<double>{1.0, -0.5}), std::domain_error);
  CHECK_THROWS_AS(make_law(multiplicity_a(2, 1.0), Flavor::Bessel, 0.0), std::invalid_argument);
}

TEST_CASE("mode of the cauchy flavor") {
  for (int n : {2, 3, 5})
    for (double k : {1.0, 5.0, 50.0}) {
      const std::vector<double> m = mode_a(n, k);
      const ZeroSet hz = hermite_zeros(n);
      for (int i = 0; i < n; ++i)
        CHECK(m[i] == doctest::Approx(std::sqrt(2.0 * k / (n + 1.0)) * hz.zeros[n - 1 - i])
                          .epsilon(1e-13));

      // Stationarity of the log density at t = sqrt(2), checked analytically.
      const double e = k * n * (n - 1.0) / 2.0 + (n + 1.0) / 2.0;
      double nsq = 0.0;
      for (double v : m) nsq += v * v;
      for (int i = 0; i < n; ++i) {
        double g = -4.0 * e * m[i] / (2.0 + 2.0 * nsq);
        for (int j = 0; j < n; ++j)
          if (j != i) g += 2.0 * k / (m[i] - m[j]);
        CHECK(std::abs(g) < 1e-10 * (1.0 + std::abs(m[i])) * e);
      }

      // The density really drops away from the mode.
      const EnsembleLaw law = make_law(multiplicity_a(n, k), Flavor::Cauchy, kSqrt2);
      const double at_mode = log_density(law, m);
      for (double eps : {1e-3, -1e-3}) {
        std::vector<double> y = m;
        y[0] += eps;
        CHECK(log_density(law, y) < at_mode);
      }
    }
}

TEST_CASE("center of gravity marginal is standard cauchy") {
  CHECK(cog_marginal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cog_marginal_cdf(1.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(cog_marginal_cdf(-1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(cog_marginal_cdf(1e8) == doctest::Approx(1.0).epsilon(1e-7));
  for (double x : {-3.0, -0.2, 0.4, 2.0})
    CHECK(cog_marginal_cdf(x) < cog_marginal_cdf(x + 0.1));
}

TEST_CASE("selberg constant matches the one-dimensional reductions") {
  // N = 1 A reduces to the Gaussian integral, so c_k = 1 / sqrt(2 pi).
  CHECK(log_selberg_const(multiplicity_a(1, 1.0)) ==
        doctest::Approx(-0.5 * std::log(2.0 * kPi)).epsilon(1e-13));
  // N = 1 B with weight y^(2 k1): c_k = 2 / (2^(k1 + 1/2) Gamma(k1 + 1/2)).
  for (double k1 : {0.5, 2.0}) {
    const double target = std::log(2.0) - (k1 + 0.5) * std::log(2.0) - log_gamma(k1 + 0.5);
    CHECK(log_selberg_const(multiplicity_b(1, k1, 0.0)) ==
          doctest::Approx(target).epsilon(1e-13));
  }
}
