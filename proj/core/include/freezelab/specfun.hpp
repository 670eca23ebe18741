#pragma once

namespace freezelab {

// ln Gamma(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

// Complementary error function.
double erfc(double x);

// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double reg_gamma_p(double a, double x);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace freezelab
