#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsnn/rng.hpp"

namespace dsnn {

// Binary connectivity of one layer, shape [n_post, n_pre]; row i is the
// fan-in of post-synaptic neuron i. 1 = active, 0 = pruned.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t n_post, std::size_t n_pre, bool active = false);
  Mask(std::size_t n_post, std::size_t n_pre, std::vector<std::uint8_t> bits);

  static Mask ones(std::size_t n_post, std::size_t n_pre) { return Mask(n_post, n_pre, true); }
  static Mask zeros(std::size_t n_post, std::size_t n_pre) { return Mask(n_post, n_pre, false); }

  std::size_t n_post() const noexcept { return n_post_; }
  std::size_t n_pre() const noexcept { return n_pre_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool active(std::size_t flat) const noexcept { return bits_[flat] != 0; }
  bool active(std::size_t post, std::size_t pre) const noexcept {
    return bits_[post * n_pre_ + pre] != 0;
  }
  void set(std::size_t flat, bool on) noexcept { bits_[flat] = on ? 1 : 0; }
  void set(std::size_t post, std::size_t pre, bool on) noexcept {
    bits_[post * n_pre_ + pre] = on ? 1 : 0;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t nnz() const noexcept;
  std::size_t nnz(std::size_t begin, std::size_t end) const noexcept;
  std::size_t row_nnz(std::size_t post) const noexcept;
  // Active outgoing connections of pre-synaptic neuron `pre`.
  std::size_t col_nnz(std::size_t pre) const noexcept;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t n_post_ = 0;
  std::size_t n_pre_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Erdős–Rényi layer spec. Construct either from the scaling factor directly
// or via from_density(), which solves the connection-probability formula for
// epsilon.
struct ErSpec {
  std::size_t n_post = 0;
  std::size_t n_pre = 0;
  double epsilon = 0.0;

  static ErSpec from_density(std::size_t n_post, std::size_t n_pre, double target_density);
};

// min(1, epsilon * (n_post + n_pre) / (n_post * n_pre)).
double er_probability(const ErSpec& spec);

// Every entry independently active with probability er_probability(spec).
Mask er_init(const ErSpec& spec, Rng& rng);

double density(const Mask& mask) noexcept;

// Deactivates uniformly chosen active entries until nnz <= floor(max_density * size).
// Returns the number of entries removed.
std::size_t cap_density(Mask& mask, double max_density, Rng& rng);

// Activates uniformly chosen inactive entries until nnz >= floor(min_density * size).
// Returns the number of entries added.
std::size_t fill_density(Mask& mask, double min_density, Rng& rng);

}  // namespace dsnn
