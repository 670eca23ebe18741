#pragma once

#include <span>
#include <vector>

#include "freezelab/ensembles.hpp"
#include "freezelab/linalg.hpp"

namespace freezelab {

// Scaled zero vector that maximizes the chamber potential (descending order):
//   A: the Hermite zero vector z of degree N;
//   B: r with r_i^2 = 2 * (zeros of L_N^(nu-1)), nu > 0;
//   D: r from the zeros of L_{N-1}^(1), padded with r_N = 0 (N >= 2).
struct PeakVector {
  RootSystem system = RootSystem::A;
  int n = 0;
  double nu = 0.0;  // B only
  std::vector<double> coords;
  double norm_sq() const;
};

PeakVector peak_vector(RootSystem system, int n, double nu = 0.0);

// Potential maximized by the peak vector:
//   A: sum_{i<j} ln(y_i - y_j) - ||y||^2 / 2;
//   B: 2 sum_{i<j} ln(y_i^2 - y_j^2) + 2 nu sum ln y_i - ||y||^2 / 2.
double w_objective(RootSystem system, std::span<const double> y, double nu = 0.0);

// Covariance data of the frozen Gaussian fluctuation around the peak.
struct FrozenCovariance {
  RootSystem system = RootSystem::A;
  Flavor flavor = Flavor::Bessel;
  int n = 0;
  double nu = 0.0;
  SymMatrix sigma_inv;
  SymMatrix sigma;
  EigenDecomp eigen;  // of sigma_inv, ascending
};

// Defined for (A, Bessel), (A, Cauchy), (B, Bessel, nu > 0), (D, Bessel).
FrozenCovariance frozen_covariance(RootSystem system, Flavor flavor, int n, double nu = 0.0);

// Dual-orthogonal-polynomial closed form for Sigma itself (A, Bessel flavor).
SymMatrix sigma_closed_a(int n);

// Sigma_Cauchy via the subtraction form (Sigma - z z^T / (4 ||z||^2)) / (N+1);
// agrees with inverting the Cauchy-flavor sigma_inv.
SymMatrix sigma_cauchy_a_subtraction(int n);

// Variant with the alternating sign applied to the whole bracket, kept only to
// measure its off-diagonal deviation from the consistent forms.
SymMatrix sigma_cauchy_a_printed(int n);

enum class RescaleDirection { Forward, Inverse };

// Forward: y + (1/sqrt(k) - 1) * proj_peak(y); Inverse: y + (sqrt(k) - 1) * proj_peak(y).
std::vector<double> rescale(std::span<const double> y, double k, const PeakVector& peak,
                            RescaleDirection direction);

enum class LimitSystem { A, B, D, BOneSided };

std::string to_string(LimitSystem s);

// Half-space limit law of the rescaled ensembles: the scale mixture
//   integral of N(sqrt(mean_scale * s) * peak, s * A Sigma A) over the
//   subordinator at t = sqrt(2), with A the projection onto peak-perp.
struct LimitLaw {
  LimitSystem system = LimitSystem::A;
  int n = 0;
  double nu = 0.0;
  PeakVector peak;
  FrozenCovariance bessel_cov;
  SymMatrix projection_perp;  // I - p p^T / ||p||^2
  Matrix perp_factor;         // Cholesky factor of A Sigma A (rank N-1)
  double peak_norm_sq = 0.0;
  double mean_scale = 1.0;       // 2 for A, 1 for B/D
  double peak_eigenvalue = 0.0;  // eigenvalue of sigma_inv on the peak direction
  double log_norm = 0.0;         // log of the closed-form normalization constant
};

// A: n >= 2; B: n >= 1 with nu > 0; D and BOneSided: n >= 2.
LimitLaw limit_law(LimitSystem system, int n, double nu = 0.0);

// Strict interior of the support: <y, peak> > 0 (and y_N > 0 one-sided).
bool limit_support_contains(const LimitLaw& law, std::span<const double> y);

double limit_log_density(const LimitLaw& law, std::span<const double> y);
double limit_density(const LimitLaw& law, std::span<const double> y);

// Density of the mode-centered Cauchy flavor (system A, t = sqrt(2)) divided
// by the frozen Gaussian N(0, Sigma_Cauchy) and scaled by
// sqrt(k N (N-1) / (N+1)) e^((N+1)/2). Tends to 1 as k grows, with O(1/k)
// error, for offsets x orthogonal to the peak vector; along the peak the
// centered density flattens instead of localizing (which is what the rescaling
// map repairs), so peak-direction offsets probe that flattening rather than
// the constant.
double ratio_constant_a(int n, double k, std::span<const double> x);

}  // namespace freezelab
