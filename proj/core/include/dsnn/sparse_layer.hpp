#pragma once

#include <cstddef>

#include "dsnn/tensor.hpp"
#include "dsnn/topology.hpp"

namespace dsnn {

// One fully connected synaptic layer: weights [n_post, n_pre], its mask and
// a dense momentum buffer that also tracks inactive entries.
struct SparseLayer {
  Tensor weights;
  Mask mask;
  Tensor momentum;

  SparseLayer() = default;
  SparseLayer(Tensor w, Mask m);
  SparseLayer(Tensor w, Mask m, Tensor mom);

  std::size_t n_post() const noexcept { return mask.n_post(); }
  std::size_t n_pre() const noexcept { return mask.n_pre(); }

  // Zeroes weights of inactive entries.
  void enforce_mask() noexcept;
  // Sum of |w| over inactive entries; zero when the layer is consistent.
  double inactive_magnitude() const noexcept;
  // M ⊙ W, independent of whether enforce_mask() has been applied.
  Tensor effective_weights() const;
  // (M ⊙ W)^T with shape [n_pre, n_post].
  Tensor effective_weights_transposed() const;
};

// Weights drawn uniformly in ±sqrt(6 / fan_in), fan_in being the expected
// active fan-in under `mask`, then masked.
SparseLayer make_layer(Mask mask, Rng& rng);

}  // namespace dsnn
