#pragma once

#include <cstdint>

namespace freezelab {

// Splittable deterministic generator: xoshiro256++ seeded through a splitmix64
// chain mixing (seed, stream). Identical (seed, stream) pairs reproduce the
// same sequence on every platform; distinct stream ids give independent
// substreams. All variate transforms below use only IEEE-exact primitives
// where it matters for reproducibility.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // strictly inside (0, 1)
  double normal();   // Marsaglia polar, one spare cached
  // Gamma(shape, 1) via Marsaglia-Tsang squeeze, with the boost for shape < 1.
  double gamma(double shape);
  // chi_d = sqrt(chi-squared with d degrees of freedom); d >= 0, chi_0 = 0.
  double chi(double dof);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_ = 0, stream_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace freezelab
