#include "dsnn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsnn/error.hpp"
#include "dsnn/tensor.hpp"

namespace dsnn {

Mask::Mask(std::size_t n_post, std::size_t n_pre, bool active)
    : n_post_(n_post), n_pre_(n_pre), bits_(n_post * n_pre, active ? 1 : 0) {}

Mask::Mask(std::size_t n_post, std::size_t n_pre, std::vector<std::uint8_t> bits)
    : n_post_(n_post), n_pre_(n_pre), bits_(std::move(bits)) {
  if (bits_.size() != n_post * n_pre) {
    throw DimensionError("mask bits do not match shape " + shape_string({n_post, n_pre}));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t Mask::nnz() const noexcept { return nnz(0, bits_.size()); }

std::size_t Mask::nnz(std::size_t begin, std::size_t end) const noexcept {
  std::size_t count = 0;
  for (std::size_t i = begin; i < end; ++i) count += bits_[i];
  return count;
}

std::size_t Mask::row_nnz(std::size_t post) const noexcept {
  return nnz(post * n_pre_, (post + 1) * n_pre_);
}

std::size_t Mask::col_nnz(std::size_t pre) const noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n_post_; ++i) count += bits_[i * n_pre_ + pre];
  return count;
}

ErSpec ErSpec::from_density(std::size_t n_post, std::size_t n_pre, double target_density) {
  if (n_post == 0 || n_pre == 0) throw ArgumentError("ER layer must have nonzero size");
  if (!(target_density > 0.0 && target_density <= 1.0)) {
    throw ArgumentError("target density must lie in (0, 1], got " + std::to_string(target_density));
  }
  const double np = static_cast<double>(n_post);
  const double nq = static_cast<double>(n_pre);
  return ErSpec{n_post, n_pre, target_density * np * nq / (np + nq)};
}

double er_probability(const ErSpec& spec) {
  if (spec.n_post == 0 || spec.n_pre == 0) throw ArgumentError("ER layer must have nonzero size");
  if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
    throw ArgumentError("ER epsilon must be finite and non-negative");
  }
  const double np = static_cast<double>(spec.n_post);
  const double nq = static_cast<double>(spec.n_pre);
  return std::min(1.0, spec.epsilon * (np + nq) / (np * nq));
}

Mask er_init(const ErSpec& spec, Rng& rng) {
  const double p = er_probability(spec);
  Mask mask(spec.n_post, spec.n_pre);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.set(i, rng.bernoulli(p));
  return mask;
}

double density(const Mask& mask) noexcept {
  if (mask.size() == 0) return 0.0;
  return static_cast<double>(mask.nnz()) / static_cast<double>(mask.size());
}

namespace {

std::size_t target_count(const Mask& mask, double rho) {
  return static_cast<std::size_t>(std::floor(rho * static_cast<double>(mask.size()) + 1e-9));
}

// Flips `count` entries drawn uniformly from those whose state is `from`.
void flip_random(Mask& mask, bool from, std::size_t count, Rng& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.active(i) == from) pool.push_back(i);
  }
  // Partial Fisher-Yates: the first `count` slots end up a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    mask.set(pool[i], !from);
  }
}

}  // namespace

std::size_t cap_density(Mask& mask, double max_density, Rng& rng) {
  const std::size_t cap = target_count(mask, max_density);
  const std::size_t nnz = mask.nnz();
  if (nnz <= cap) return 0;
  flip_random(mask, true, nnz - cap, rng);
  return nnz - cap;
}

std::size_t fill_density(Mask& mask, double min_density, Rng& rng) {
  const std::size_t floor_count = target_count(mask, min_density);
  const std::size_t nnz = mask.nnz();
  if (nnz >= floor_count) return 0;
  flip_random(mask, false, floor_count - nnz, rng);
  return floor_count - nnz;
}

}  // namespace dsnn
