#include "dsnn/neuron.hpp"

#include <cmath>
#include <string>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

void check_input(const Tensor& input, const SparseLayer& layer, const char* op) {
  if (input.rank() != 3 || input.dim(2) != layer.n_pre()) {
    throw DimensionError(std::string(op) + ": input " + shape_string(input.shape()) +
                         " does not feed a layer with n_pre=" + std::to_string(layer.n_pre()));
  }
  if (layer.weights.rank() != 2 || layer.weights.dim(0) != layer.n_post() ||
      layer.weights.dim(1) != layer.n_pre()) {
    throw DimensionError(std::string(op) + ": weights " + shape_string(layer.weights.shape()) +
                         " do not match mask");
  }
}

void check_upstream(const Tensor& upstream, std::size_t steps, std::size_t batch,
                    std::size_t n_post, const char* op) {
  if (upstream.shape() != std::vector<std::size_t>{steps, batch, n_post}) {
    throw DimensionError(std::string(op) + ": upstream gradient " +
                         shape_string(upstream.shape()) + " expected " +
                         shape_string({steps, batch, n_post}));
  }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// grad_W = Σ_t g(t)^T x(t); grad_x(t) = g(t) (M ⊙ W).
LayerGrads project_grads(const Tensor& input, const Tensor& current_grads,
                         const SparseLayer& layer, bool want_input_grad) {
  const std::size_t steps = input.dim(0);
  const std::size_t batch = input.dim(1);
  const std::size_t n_pre = layer.n_pre();
  const std::size_t n_post = layer.n_post();

  LayerGrads grads;
  grads.weights = Tensor({n_post, n_pre});
  MatrixView gw = as_matrix(grads.weights);
  for (std::size_t t = 0; t < steps; ++t) {
    gemm_tn({current_grads.slab(t), batch, n_post}, {input.slab(t), batch, n_pre}, gw, true);
  }
  if (want_input_grad) {
    const Tensor w_eff = layer.effective_weights();
    grads.input = Tensor({steps, batch, n_pre});
    for (std::size_t t = 0; t < steps; ++t) {
      gemm({current_grads.slab(t), batch, n_post}, as_matrix(w_eff),
           {grads.input.slab(t), batch, n_pre});
    }
  }
  return grads;
}

}  // namespace

void LifParams::validate() const {
  if (!(tau >= 0.0 && tau < 1.0)) throw ArgumentError("tau must lie in [0, 1)");
  if (!(v_th > 0.0) || !std::isfinite(v_th)) throw ArgumentError("v_th must be positive");
  if (!(surrogate_width > 0.0) || !std::isfinite(surrogate_width)) {
    throw ArgumentError("surrogate_width must be positive");
  }
}

LayerTrace lif_forward(const Tensor& input_spikes, const SparseLayer& layer,
                       const LifParams& params) {
  check_input(input_spikes, layer, "lif_forward");
  const std::size_t steps = input_spikes.dim(0);
  const std::size_t batch = input_spikes.dim(1);
  const std::size_t n_pre = layer.n_pre();
  const std::size_t n = layer.n_post();

  LayerTrace trace;
  trace.input = input_spikes;
  trace.potential = Tensor({steps, batch, n});
  trace.spikes = Tensor({steps, batch, n});
  trace.reset_potential = Tensor({steps, batch, n});

  const Tensor w_t = layer.effective_weights_transposed();
  for (std::size_t t = 0; t < steps; ++t) {
    auto u = trace.potential.slab(t);
    gemm({input_spikes.slab(t), batch, n_pre}, as_matrix(w_t), {u, batch, n});
    auto a = trace.spikes.slab(t);
    auto reset = trace.reset_potential.slab(t);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (t > 0) u[i] += params.tau * trace.reset_potential.slab(t - 1)[i];
      const double spike = params.mode == SpikeMode::kHard
                               ? (u[i] - params.v_th >= 0.0 ? 1.0 : 0.0)
                               : sigmoid((u[i] - params.v_th) / params.surrogate_width);
      a[i] = spike;
      reset[i] = u[i] * (1.0 - spike);
    }
  }
  return trace;
}

double surrogate_grad(double u, const LifParams& params) {
  const double w = params.surrogate_width;
  const double height = 1.0 - std::abs(u - params.v_th) / w;
  return height > 0.0 ? height / w : 0.0;
}

LayerGrads lif_backward(const LayerTrace& trace, const Tensor& upstream_grads,
                        const SparseLayer& layer, const LifParams& params,
                        bool want_input_grad) {
  check_input(trace.input, layer, "lif_backward");
  const std::size_t steps = trace.steps();
  const std::size_t batch = trace.batch();
  const std::size_t n = layer.n_post();
  if (trace.neurons() != n) throw DimensionError("lif_backward: trace does not match layer");
  check_upstream(upstream_grads, steps, batch, n, "lif_backward");

  const bool soft = params.mode == SpikeMode::kSoft;
  Tensor current_grads({steps, batch, n});
  std::vector<double> carry(batch * n, 0.0);  // dL/du_reset(t) arriving from t + 1
  for (std::size_t step = steps; step-- > 0;) {
    auto u = trace.potential.slab(step);
    auto a = trace.spikes.slab(step);
    auto g_spike = upstream_grads.slab(step);
    auto g_current = current_grads.slab(step);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double spike_deriv = soft ? a[i] * (1.0 - a[i]) / params.surrogate_width
                                      : surrogate_grad(u[i], params);
      double g = carry[i] * (1.0 - a[i]) + g_spike[i] * spike_deriv;
      if (soft) g -= carry[i] * u[i] * spike_deriv;
      g_current[i] = g;
      carry[i] = params.tau * g;
    }
  }
  return project_grads(trace.input, current_grads, layer, want_input_grad);
}

Tensor readout_forward(const Tensor& input_spikes, const SparseLayer& layer,
                       const LifParams& params) {
  check_input(input_spikes, layer, "readout_forward");
  const std::size_t steps = input_spikes.dim(0);
  const std::size_t batch = input_spikes.dim(1);
  const std::size_t n_pre = layer.n_pre();
  const std::size_t n = layer.n_post();

  Tensor logits({steps, batch, n});
  const Tensor w_t = layer.effective_weights_transposed();
  for (std::size_t t = 0; t < steps; ++t) {
    auto out = logits.slab(t);
    gemm({input_spikes.slab(t), batch, n_pre}, as_matrix(w_t), {out, batch, n});
    if (t > 0) {
      auto prev = logits.slab(t - 1);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += params.tau * prev[i];
    }
  }
  return logits;
}

LayerGrads readout_backward(const Tensor& input_spikes, const Tensor& upstream_grads,
                            const SparseLayer& layer, const LifParams& params,
                            bool want_input_grad) {
  check_input(input_spikes, layer, "readout_backward");
  const std::size_t steps = input_spikes.dim(0);
  const std::size_t batch = input_spikes.dim(1);
  const std::size_t n = layer.n_post();
  check_upstream(upstream_grads, steps, batch, n, "readout_backward");

  Tensor current_grads({steps, batch, n});
  for (std::size_t step = steps; step-- > 0;) {
    auto g = current_grads.slab(step);
    auto up = upstream_grads.slab(step);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = up[i];
      if (step + 1 < steps) g[i] += params.tau * current_grads.slab(step + 1)[i];
    }
  }
  return project_grads(input_spikes, current_grads, layer, want_input_grad);
}

}  // namespace dsnn
