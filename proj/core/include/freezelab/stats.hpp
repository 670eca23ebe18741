#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "freezelab/linalg.hpp"
#include "freezelab/rng.hpp"
#include "freezelab/sampling.hpp"
#include "json.hpp"

namespace freezelab {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value = -1.0;  // negative when the test has no p-value
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool pass = false;
  nlohmann::ordered_json metadata;

  nlohmann::ordered_json to_json() const;
};

// Kolmogorov-Smirnov test of iid samples against a continuous CDF. The pass
// criterion is D_n <= c(alpha)/sqrt(n) with c(0.10) = 1.224, c(0.05) = 1.358,
// c(0.01) = 1.628; other alpha values are rejected. The reported p-value is
// the asymptotic Kolmogorov tail, for information only.
TestReport ks_one_sample(const std::string& name, std::vector<double> samples,
                         const std::function<double(double)>& cdf, double alpha);

// Two-sample energy test with a permutation null. Rows of x and y are points
// of dimension dim. The statistic is the V-type energy distance
//   2 mean d(x, y) - mean d(x, x') - mean d(y, y'),
// its permutation p-value is (1 + #{E_perm >= E_obs}) / (permutations + 1),
// and the test passes when p > alpha. The observed statistic goes through the
// same code path as the permuted ones.
TestReport energy_two_sample(const std::string& name, const std::vector<double>& x,
                             const std::vector<double>& y, int dim, int permutations,
                             double alpha, RngStream& rng);

struct McNormalization {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
  bool invalid_proposal = false;  // a weight could not be evaluated finitely
  bool pass = false;              // |estimate - 1| <= max(3 std_error, 0.01)
};

// Importance-sampling check that exp(log_target) integrates to one. Points
// where log_target is -infinity contribute weight zero; a non-finite proposal
// density or overflowing weight marks the proposal invalid and fails the
// check.
McNormalization mc_normalize(const std::function<double(const std::vector<double>&)>& log_target,
                             const Proposal& proposal, std::size_t count, RngStream& rng);

TestReport mc_normalization_report(const std::string& name, const McNormalization& mc);

// Central-difference gradient of f at x with step h.
std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double h);

struct Moments {
  std::size_t count = 0;
  std::vector<double> mean;
  SymMatrix covariance;  // unbiased
};

// Sample mean and unbiased covariance of row-major data; needs count >= 2.
Moments empirical_moments(const std::vector<double>& data, int dim);

}  // namespace freezelab
