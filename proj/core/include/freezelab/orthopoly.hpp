#pragma once

#include <span>
#include <string>
#include <vector>

namespace freezelab {

struct PolyValue {
  double value;
  double derivative;
};

// Physicists' Hermite polynomials: H_0 = 1, H_1(x) = 2x,
// H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x), H_n' = 2n H_{n-1}.
PolyValue hermite_eval(int n, double x);

// Generalized Laguerre polynomials L_n^(alpha) via the three-term recurrence;
// alpha > -1, with alpha = -1 permitted (degenerate first-coefficient case).
PolyValue laguerre_eval(int n, double alpha, double x);

struct ZeroSet {
  enum class Family { Hermite, Laguerre };
  Family family;
  int n = 0;
  double alpha = 0.0;          // Laguerre only
  std::vector<double> zeros;   // ascending
};

// Zeros of H_n (1 <= n <= 200): eigenvalues of the recurrence Jacobi matrix,
// Newton-polished, exactly symmetrized about 0.
ZeroSet hermite_zeros(int n);

// Zeros of L_n^(alpha) (1 <= n <= 200, alpha > -1): ascending, strictly positive.
ZeroSet laguerre_zeros(int n, double alpha);

// Sum of inverse zeros of L_n^(alpha), computed from the zeros themselves.
double inverse_zero_sum(int n, double alpha);

struct IdentityEntry {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double deviation = 0.0;
  // Recorded for comparison only; excluded from max_deviation().
  bool informational = false;
};

struct ZeroIdentityReport {
  std::vector<IdentityEntry> entries;
  double max_deviation() const;
};

// Hermite degree-n zero identities: sum of squares n(n-1)/2 and the
// log-Vandermonde closed form.
ZeroIdentityReport hermite_identity_report(int n);

// Identities for r with r_i^2 = 2 * (zeros of L_n^(nu-1)): the computed
// ||r||^2 = 2n(n+nu-1) (asserted) vs n(n+nu-1) (recorded), and the
// log-potential closed form.
ZeroIdentityReport laguerre_identity_report(int n, double nu);

ZeroIdentityReport zero_identity_report(ZeroSet::Family family, int n, double nu = 0.0);

}  // namespace freezelab
