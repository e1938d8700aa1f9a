#pragma once

#include <cstddef>

#include "dsnn/sparse_layer.hpp"
#include "dsnn/tensor.hpp"

namespace dsnn {

// kHard emits binary spikes and trains through the surrogate derivative.
// kSoft replaces the step by a sigmoid of the same width, making the whole
// unrolled network differentiable; it exists for gradient verification.
enum class SpikeMode { kHard, kSoft };

struct LifParams {
  double tau = 0.5;
  double v_th = 1.0;
  double surrogate_width = 1.0;
  SpikeMode mode = SpikeMode::kHard;

  void validate() const;
};

// Per-step state of one LIF layer, every tensor shaped [T, batch, n] except
// `input`, which is the [T, batch, n_pre] drive the layer saw.
struct LayerTrace {
  Tensor input;
  Tensor potential;        // u(t) before reset
  Tensor spikes;           // a(t)
  Tensor reset_potential;  // u(t) after reset, carried into t + 1

  std::size_t steps() const { return spikes.dim(0); }
  std::size_t batch() const { return spikes.dim(1); }
  std::size_t neurons() const { return spikes.dim(2); }
};

struct LayerGrads {
  Tensor weights;  // dense [n_post, n_pre], masked entries included
  Tensor input;    // [T, batch, n_pre]; empty when not requested
};

// Iterative LIF with hard reset:
//   u(t) = tau * u_reset(t-1) + (M ⊙ W) x(t)
//   a(t) = Θ(u(t) - V_th)       (Θ(0) = 1)
//   u_reset(t) = u(t) * (1 - a(t))
LayerTrace lif_forward(const Tensor& input_spikes, const SparseLayer& layer,
                       const LifParams& params);

// Triangular surrogate max(0, 1 - |u - V_th| / width) / width.
double surrogate_grad(double u, const LifParams& params);

// Backpropagation through time for lif_forward. In hard mode the spike
// derivative is the surrogate and the reset gate (1 - a) is a constant; in
// soft mode the exact derivative of the sigmoid relaxation is used, gate
// included.
LayerGrads lif_backward(const LayerTrace& trace, const Tensor& upstream_grads,
                        const SparseLayer& layer, const LifParams& params,
                        bool want_input_grad = true);

// Non-spiking leaky integrator used as the output layer:
//   O(t) = tau * O(t-1) + (M ⊙ W) x(t)
Tensor readout_forward(const Tensor& input_spikes, const SparseLayer& layer,
                       const LifParams& params);

LayerGrads readout_backward(const Tensor& input_spikes, const Tensor& upstream_grads,
                            const SparseLayer& layer, const LifParams& params,
                            bool want_input_grad = true);

}  // namespace dsnn
