#include "dsnn/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

std::mt19937_64 make_engine(std::uint64_t hi, std::uint64_t lo) {
  std::seed_seq seq{static_cast<std::uint32_t>(hi >> 32), static_cast<std::uint32_t>(hi),
                    static_cast<std::uint32_t>(lo >> 32), static_cast<std::uint32_t>(lo)};
  return std::mt19937_64(seq);
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : Rng(0, seed) {}

Rng::Rng(std::uint64_t key_hi, std::uint64_t key_lo)
    : key_hi_(key_hi), key_lo_(key_lo), engine_(make_engine(key_hi, key_lo)) {}

Rng Rng::split(std::uint64_t stream) const {
  const std::uint64_t hi = mix(key_hi_ ^ mix(key_lo_));
  const std::uint64_t lo = mix(key_lo_ + mix(stream + 0x632be59bd9b4e019ULL));
  return Rng(hi, lo);
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("Rng::below requires n > 0");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

Tensor rng_uniform(Rng& rng, std::size_t n) {
  Tensor out({n});
  for (auto& v : out.data()) v = rng.uniform();
  return out;
}

}  // namespace dsnn
