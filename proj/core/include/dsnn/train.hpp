#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dsnn/data.hpp"
#include "dsnn/neuron.hpp"
#include "dsnn/rewire.hpp"
#include "dsnn/sparse_layer.hpp"
#include "dsnn/sparsity.hpp"

namespace dsnn {

enum class LrSchedule { kConstant, kCosine };

struct TrainConfig {
  std::uint64_t seed = 0;
  std::vector<std::size_t> layer_sizes{784, 300, 10};
  std::size_t time_steps = 4;
  LifParams lif;
  PqParams pq;
  Scope scope = Scope::kLayer;
  double initial_density = 0.5;
  std::size_t epoch_frequency = 5;
  double regrow_fraction = 0.5;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  double lr = 0.05;
  double opt_momentum = 0.9;
  Encoding encoder = Encoding::kDirect;
  LrSchedule lr_schedule = LrSchedule::kConstant;
  std::vector<std::size_t> exempt_layers;  // weight-layer indices never rewired
  bool log_pq_every_epoch = false;

  // Throws ConfigError naming the first offending field.
  void validate() const;
  std::size_t num_layers() const { return layer_sizes.size() - 1; }
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<double> density;  // per weight layer, end of epoch
  double sops = 0.0;            // mean synaptic operations per test sample
  std::vector<RewireEvent> events;
  std::vector<PqReport> pq_reports;
};

struct TrainResult {
  std::vector<SparseLayer> layers;
  std::vector<EpochMetrics> metrics;
};

struct TetLoss {
  double loss = 0.0;
  Tensor grad;  // dL/dlogits, [T, batch, classes]
};

// Mean over time steps and samples of softmax cross-entropy on per-step logits.
TetLoss tet_loss(const Tensor& logits, std::span<const std::size_t> labels);

// momentum <- mu * momentum + grad on every entry, weights <- weights - lr * momentum,
// then inactive weights are forced back to 0. A non-finite gradient aborts
// the step before anything changes.
void sgd_momentum_step(SparseLayer& layer, const Tensor& dense_grad, double lr, double mu);

// Synaptic operations of one layer: Σ_t Σ_b Σ_j a_j(t) * (active fan-out of j).
double layer_sops(const Tensor& spike_inputs, const Mask& mask);

// Σ over layers of layer_sops, divided by the batch size.
double estimate_sops(std::span<const Tensor> spike_inputs, std::span<const Mask> masks);

inline constexpr double kJoulesPerSynapticOp = 77e-15;

double estimate_energy(double sops);

// ER masks drawn at the configured density, adjusted to exactly floor(rho * N)
// active entries, and uniformly initialized weights.
std::vector<SparseLayer> init_network(const TrainConfig& config, Rng& rng);

struct Evaluation {
  double accuracy = 0.0;
  double sops = 0.0;
};

// Classifies by the argmax of logits summed over time.
Evaluation evaluate(std::span<const SparseLayer> layers, const Dataset& dataset,
                    const TrainConfig& config, Rng& rng);

using EpochObserver = std::function<void(const EpochMetrics&, std::span<const SparseLayer>)>;

// Stage I every epoch (masked training with the TET loss); Stage II at
// epochs where epoch % epoch_frequency == 0 (PQ measurement per scope group
// followed by prune and regrow). Throws InvariantError naming the epoch and
// layer if the network state breaks a training invariant.
TrainResult two_stage_train(const TrainConfig& config, const Dataset& train, const Dataset& test,
                            const EpochObserver& observer = {});

}  // namespace dsnn
