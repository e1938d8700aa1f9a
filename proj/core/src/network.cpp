#include "dsnn/network.hpp"

#include "dsnn/error.hpp"

namespace dsnn {

NetworkTrace network_forward(std::span<const SparseLayer> layers, const Tensor& input,
                             const LifParams& params) {
  if (layers.empty()) throw ArgumentError("network needs at least one layer");
  NetworkTrace trace;
  trace.hidden.reserve(layers.size() - 1);
  const Tensor* drive = &input;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    trace.hidden.push_back(lif_forward(*drive, layers[l], params));
    drive = &trace.hidden.back().spikes;
  }
  trace.readout_input = *drive;
  trace.logits = readout_forward(trace.readout_input, layers.back(), params);
  return trace;
}

std::vector<Tensor> network_backward(std::span<const SparseLayer> layers,
                                     const NetworkTrace& trace, const Tensor& logit_grads,
                                     const LifParams& params) {
  if (trace.hidden.size() + 1 != layers.size()) {
    throw DimensionError("network trace does not match layer count");
  }
  std::vector<Tensor> grads(layers.size());
  const std::size_t last = layers.size() - 1;
  LayerGrads g = readout_backward(trace.readout_input, logit_grads, layers[last], params,
                                  /*want_input_grad=*/last > 0);
  grads[last] = std::move(g.weights);
  Tensor upstream = std::move(g.input);
  for (std::size_t l = last; l-- > 0;) {
    LayerGrads lg = lif_backward(trace.hidden[l], upstream, layers[l], params,
                                 /*want_input_grad=*/l > 0);
    grads[l] = std::move(lg.weights);
    upstream = std::move(lg.input);
  }
  return grads;
}

}  // namespace dsnn
