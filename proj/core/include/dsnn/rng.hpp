#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "dsnn/tensor.hpp"

namespace dsnn {

// Seeded generator with reproducible sub-streams.
//
// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
// standard; every conversion to a distribution is done here so draws are
// identical across standard-library implementations. split() derives a child
// from the construction path (seed plus stream ids), not from the current
// state, so a sub-stream does not depend on how many draws preceded it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p);
  double normal();

 private:
  Rng(std::uint64_t key_hi, std::uint64_t key_lo);

  std::uint64_t key_hi_;
  std::uint64_t key_lo_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// n uniform draws in [0, 1).
Tensor rng_uniform(Rng& rng, std::size_t n);

}  // namespace dsnn
