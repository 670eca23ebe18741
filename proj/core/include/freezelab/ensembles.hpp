#pragma once

#include <span>
#include <string>
#include <vector>

namespace freezelab {

enum class RootSystem { A, B, D };
enum class Flavor { Bessel, Cauchy };

std::string to_string(RootSystem s);
std::string to_string(Flavor f);

// Multiplicity parameters: A and D carry a single k (stored in k1); B carries
// the pair (k1, k2) with k1 on the short roots and k2 on the long ones.
struct MultiplicitySpec {
  RootSystem system = RootSystem::A;
  int n = 1;
  double k1 = 0.0;
  double k2 = 0.0;

  double k() const;      // A/D multiplicity
  double nu() const;     // B: k1 / k2 (requires k2 > 0)
  double gamma() const;  // homogeneity exponent of the weight
};

MultiplicitySpec multiplicity_a(int n, double k);
MultiplicitySpec multiplicity_b(int n, double k1, double k2);
MultiplicitySpec multiplicity_b_nu_beta(int n, double nu, double beta);
MultiplicitySpec multiplicity_d(int n, double k);

// Strict interior of the closed Weyl chamber:
//   A: y_1 > ... > y_N;  B: y_1 > ... > y_N > 0;  D: y_1 > ... > y_{N-1} > |y_N|.
bool chamber_contains(RootSystem system, int n, std::span<const double> y);

// ln w_k(y) on the chamber interior.
double log_weight(const MultiplicitySpec& spec, std::span<const double> y);

struct EnsembleLaw {
  MultiplicitySpec spec;
  Flavor flavor = Flavor::Bessel;
  double t = 1.0;
  double gamma = 0.0;
  double log_norm = 0.0;  // log of the density's normalization constant at time t
};

EnsembleLaw make_law(const MultiplicitySpec& spec, Flavor flavor, double t);

// Log density on the chamber interior; boundary or exterior points throw
// std::domain_error.
double log_density(const EnsembleLaw& law, std::span<const double> y);

// Maximizer of the Cauchy-flavor density for system A at time sqrt(2):
// sqrt(2k/(N+1)) times the Hermite zero vector, descending.
std::vector<double> mode_a(int n, double k);

// CDF of the center-of-gravity marginal <y, 1>/sqrt(N) for the Cauchy flavor
// of system A at t = sqrt(2): standard Cauchy at every k.
double cog_marginal_cdf(double x);

// log of the Gaussian-side normalization constant c_k (time-1 Bessel flavor).
double log_selberg_const(const MultiplicitySpec& spec);

// log of the printed closed-form Cauchy normalization constants at t = sqrt(2);
// must agree with the general route in make_law.
double log_cauchy_norm_printed(const MultiplicitySpec& spec);

}  // namespace freezelab
