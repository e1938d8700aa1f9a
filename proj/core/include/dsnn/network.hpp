#pragma once

#include <span>
#include <vector>

#include "dsnn/neuron.hpp"
#include "dsnn/sparse_layer.hpp"
#include "dsnn/tensor.hpp"

namespace dsnn {

// Forward record of a feed-forward stack: LIF layers followed by one leaky
// readout. hidden.size() == layers.size() - 1.
struct NetworkTrace {
  std::vector<LayerTrace> hidden;
  Tensor readout_input;  // [T, batch, n_pre of the readout]
  Tensor logits;         // [T, batch, classes]
};

NetworkTrace network_forward(std::span<const SparseLayer> layers, const Tensor& input,
                             const LifParams& params);

// Dense weight gradients, one per layer, given dL/dlogits.
std::vector<Tensor> network_backward(std::span<const SparseLayer> layers,
                                     const NetworkTrace& trace, const Tensor& logit_grads,
                                     const LifParams& params);

}  // namespace dsnn
