#include "dsnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsnn/error.hpp"
#include "dsnn/network.hpp"
#include "dsnn/topology.hpp"

namespace dsnn {

namespace {

enum Stream : std::uint64_t {
  kInitMasks = 1,
  kInitWeights = 2,
  kShuffle = 3,
  kTrainEncode = 4,
  kTestEncode = 5,
};

std::size_t argmax_over_time(const Tensor& logits, std::size_t sample) {
  const std::size_t steps = logits.dim(0);
  const std::size_t classes = logits.dim(2);
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    double score = 0.0;
    for (std::size_t t = 0; t < steps; ++t) score += logits.at(t, sample, c);
    if (c == 0 || score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

double learning_rate(const TrainConfig& config, std::size_t epoch) {
  if (config.lr_schedule == LrSchedule::kConstant || config.epochs == 0) return config.lr;
  const double progress = static_cast<double>(epoch - 1) / static_cast<double>(config.epochs);
  return 0.5 * config.lr * (1.0 + std::cos(std::numbers::pi * progress));
}

bool exempt(const TrainConfig& config, std::size_t layer) {
  return std::find(config.exempt_layers.begin(), config.exempt_layers.end(), layer) !=
         config.exempt_layers.end();
}

void check_layers(std::span<const SparseLayer> layers, std::span<const double> density_cap,
                  std::size_t epoch, const char* stage) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string where =
        "epoch " + std::to_string(epoch) + ", layer " + std::to_string(l) + " (" + stage + "): ";
    if (layers[l].inactive_magnitude() != 0.0) {
      throw InvariantError(where + "inactive weights are nonzero");
    }
    if (!layers[l].weights.all_finite() || !layers[l].momentum.all_finite()) {
      throw InvariantError(where + "non-finite weights or momentum");
    }
    if (density(layers[l].mask) > density_cap[l]) {
      throw InvariantError(where + "density rose above its initial value");
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const char* key, const std::string& msg) { throw ConfigError(key, msg); };
  if (layer_sizes.size() < 2) fail("arch", "needs at least an input and an output size");
  for (std::size_t n : layer_sizes) {
    if (n == 0) fail("arch", "layer sizes must be positive");
  }
  if (time_steps < 1) fail("time_steps", "must be at least 1");
  if (!(lif.tau >= 0.0 && lif.tau < 1.0)) fail("tau", "must lie in [0, 1)");
  if (!(lif.v_th > 0.0) || !std::isfinite(lif.v_th)) fail("v_th", "must be positive");
  if (!(lif.surrogate_width > 0.0) || !std::isfinite(lif.surrogate_width)) {
    fail("surrogate_width", "must be positive");
  }
  if (!(pq.p > 0.0) || !std::isfinite(pq.p)) fail("p", "must be positive");
  if (!(pq.q > pq.p) || !std::isfinite(pq.q)) fail("q", "must exceed p");
  if (!(pq.alpha_r >= 0.0) || !std::isfinite(pq.alpha_r)) fail("alpha_r", "must be >= 0");
  if (!(pq.gamma >= 0.0) || !std::isfinite(pq.gamma)) fail("gamma", "must be >= 0");
  if (!(pq.beta > 0.0 && pq.beta <= 1.0)) fail("beta", "must lie in (0, 1]");
  if (!(initial_density > 0.0 && initial_density <= 1.0)) {
    fail("initial_density", "must lie in (0, 1]");
  }
  if (epoch_frequency < 1) fail("epoch_frequency", "must be at least 1");
  if (!(regrow_fraction >= 0.0 && regrow_fraction <= 1.0)) {
    fail("regrow_fraction", "must lie in [0, 1]");
  }
  if (batch_size < 1) fail("batch_size", "must be at least 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) fail("lr", "must be positive");
  if (!(opt_momentum >= 0.0 && opt_momentum < 1.0)) fail("opt_momentum", "must lie in [0, 1)");
  for (std::size_t l : exempt_layers) {
    if (l >= num_layers()) fail("exempt_layers", "index " + std::to_string(l) + " out of range");
  }
}

TetLoss tet_loss(const Tensor& logits, std::span<const std::size_t> labels) {
  if (logits.rank() != 3) throw DimensionError("tet_loss expects [T, batch, classes] logits");
  const std::size_t steps = logits.dim(0);
  const std::size_t batch = logits.dim(1);
  const std::size_t classes = logits.dim(2);
  if (steps < 1) throw ArgumentError("tet_loss needs T >= 1");
  if (labels.size() != batch) throw DimensionError("tet_loss: label count != batch size");
  for (std::size_t y : labels) {
    if (y >= classes) throw ArgumentError("tet_loss: label " + std::to_string(y) + " out of range");
  }

  TetLoss out;
  out.grad = Tensor(logits.shape());
  const double norm = 1.0 / static_cast<double>(steps * batch);
  double total = 0.0;
  std::vector<double> prob(classes);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t b = 0; b < batch; ++b) {
      const double* z = logits.data().data() + (t * batch + b) * classes;
      double* g = out.grad.data().data() + (t * batch + b) * classes;
      const double peak = *std::max_element(z, z + classes);
      double sum = 0.0;
      for (std::size_t c = 0; c < classes; ++c) {
        prob[c] = std::exp(z[c] - peak);
        sum += prob[c];
      }
      const double log_sum = std::log(sum) + peak;
      total += log_sum - z[labels[b]];
      for (std::size_t c = 0; c < classes; ++c) {
        g[c] = (prob[c] / sum - (c == labels[b] ? 1.0 : 0.0)) * norm;
      }
    }
  }
  out.loss = total * norm;
  return out;
}

void sgd_momentum_step(SparseLayer& layer, const Tensor& dense_grad, double lr, double mu) {
  if (dense_grad.shape() != layer.weights.shape()) {
    throw DimensionError("gradient " + shape_string(dense_grad.shape()) + " vs weights " +
                         shape_string(layer.weights.shape()));
  }
  if (!dense_grad.all_finite()) throw NumericError("non-finite gradient; step aborted");
  auto m = layer.momentum.data();
  auto w = layer.weights.data();
  auto g = dense_grad.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    m[i] = mu * m[i] + g[i];
    w[i] = layer.mask.active(i) ? w[i] - lr * m[i] : 0.0;
  }
}

double layer_sops(const Tensor& spike_inputs, const Mask& mask) {
  if (spike_inputs.rank() != 3 || spike_inputs.dim(2) != mask.n_pre()) {
    throw DimensionError("layer_sops: spikes " + shape_string(spike_inputs.shape()) +
                         " vs mask with n_pre=" + std::to_string(mask.n_pre()));
  }
  const std::size_t n_pre = mask.n_pre();
  std::vector<double> fan_out(n_pre);
  for (std::size_t j = 0; j < n_pre; ++j) fan_out[j] = static_cast<double>(mask.col_nnz(j));
  double total = 0.0;
  auto s = spike_inputs.data();
  for (std::size_t i = 0; i < s.size(); ++i) total += s[i] * fan_out[i % n_pre];
  return total;
}

double estimate_sops(std::span<const Tensor> spike_inputs, std::span<const Mask> masks) {
  if (spike_inputs.size() != masks.size()) {
    throw DimensionError("estimate_sops: one spike tensor per mask required");
  }
  if (spike_inputs.empty()) return 0.0;
  const std::size_t batch = spike_inputs.front().rank() == 3 ? spike_inputs.front().dim(1) : 0;
  double total = 0.0;
  for (std::size_t l = 0; l < masks.size(); ++l) {
    if (spike_inputs[l].rank() != 3 || spike_inputs[l].dim(1) != batch) {
      throw DimensionError("estimate_sops: batch sizes differ across layers");
    }
    total += layer_sops(spike_inputs[l], masks[l]);
  }
  return batch == 0 ? 0.0 : total / static_cast<double>(batch);
}

double estimate_energy(double sops) {
  if (!(sops >= 0.0)) throw ArgumentError("estimate_energy: sops must be non-negative");
  return sops * kJoulesPerSynapticOp;
}

std::vector<SparseLayer> init_network(const TrainConfig& config, Rng& rng) {
  Rng mask_rng = rng.split(kInitMasks);
  Rng weight_rng = rng.split(kInitWeights);
  std::vector<SparseLayer> layers;
  for (std::size_t l = 0; l < config.num_layers(); ++l) {
    const std::size_t n_pre = config.layer_sizes[l];
    const std::size_t n_post = config.layer_sizes[l + 1];
    Rng layer_mask_rng = mask_rng.split(l);
    Rng layer_weight_rng = weight_rng.split(l);
    Mask mask = er_init(ErSpec::from_density(n_post, n_pre, config.initial_density), layer_mask_rng);
    // Pin the Bernoulli draw to floor(rho * N) active entries.
    cap_density(mask, config.initial_density, layer_mask_rng);
    fill_density(mask, config.initial_density, layer_mask_rng);
    layers.push_back(make_layer(std::move(mask), layer_weight_rng));
  }
  return layers;
}

Evaluation evaluate(std::span<const SparseLayer> layers, const Dataset& dataset,
                    const TrainConfig& config, Rng& rng) {
  Evaluation ev;
  if (dataset.size() == 0) return ev;
  std::vector<Mask> masks;
  for (const auto& layer : layers) masks.push_back(layer.mask);
  const bool count_input = config.encoder == Encoding::kRate;

  std::size_t correct = 0;
  double sops_total = 0.0;
  Rng unused(0);
  const auto order = batches(dataset, config.batch_size, /*shuffle=*/false, unused);
  for (std::size_t b = 0; b < order.size(); ++b) {
    Rng enc = rng.split(b);
    const SpikeBatch batch = make_batch(dataset, order[b], config.time_steps, config.encoder, enc);
    const NetworkTrace trace = network_forward(layers, batch.spikes, config.lif);
    for (std::size_t i = 0; i < batch.labels.size(); ++i) {
      correct += argmax_over_time(trace.logits, i) == batch.labels[i] ? 1 : 0;
    }
    for (std::size_t l = count_input ? 0 : 1; l < layers.size(); ++l) {
      const Tensor& in = l == 0 ? batch.spikes : trace.hidden[l - 1].spikes;
      sops_total += layer_sops(in, masks[l]);
    }
  }
  const auto n = static_cast<double>(dataset.size());
  ev.accuracy = static_cast<double>(correct) / n;
  ev.sops = sops_total / n;
  return ev;
}

TrainResult two_stage_train(const TrainConfig& config, const Dataset& train, const Dataset& test,
                            const EpochObserver& observer) {
  config.validate();
  if (train.size() == 0) throw ArgumentError("training set is empty");
  if (train.dim() != config.layer_sizes.front()) {
    throw DimensionError("dataset dim " + std::to_string(train.dim()) + " != input size " +
                         std::to_string(config.layer_sizes.front()));
  }
  if (train.num_classes > config.layer_sizes.back()) {
    throw DimensionError("output layer smaller than number of classes");
  }

  Rng root(config.seed);
  TrainResult result;
  result.layers = init_network(config, root);
  auto& layers = result.layers;
  std::vector<double> density_cap;
  for (const auto& layer : layers) density_cap.push_back(density(layer.mask));

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochMetrics m;
    m.epoch = epoch;
    const double lr = learning_rate(config, epoch);

    // Stage I: masked training.
    Rng shuffle_rng = root.split(kShuffle).split(epoch);
    Rng encode_rng = root.split(kTrainEncode).split(epoch);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    const auto order = batches(train, config.batch_size, /*shuffle=*/true, shuffle_rng);
    for (std::size_t b = 0; b < order.size(); ++b) {
      Rng enc = encode_rng.split(b);
      const SpikeBatch batch =
          make_batch(train, order[b], config.time_steps, config.encoder, enc);
      const NetworkTrace trace = network_forward(layers, batch.spikes, config.lif);
      const TetLoss loss = tet_loss(trace.logits, batch.labels);
      if (!std::isfinite(loss.loss)) {
        throw InvariantError("epoch " + std::to_string(epoch) + ": non-finite training loss");
      }
      loss_sum += loss.loss * static_cast<double>(batch.labels.size());
      for (std::size_t i = 0; i < batch.labels.size(); ++i) {
        correct += argmax_over_time(trace.logits, i) == batch.labels[i] ? 1 : 0;
      }
      const auto grads = network_backward(layers, trace, loss.grad, config.lif);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!grads[l].all_finite()) {
          throw InvariantError("epoch " + std::to_string(epoch) + ", layer " +
                               std::to_string(l) + ": non-finite gradient");
        }
      }
      for (std::size_t l = 0; l < layers.size(); ++l) {
        sgd_momentum_step(layers[l], grads[l], lr, config.opt_momentum);
      }
    }
    check_layers(layers, density_cap, epoch, "stage I");
    m.train_loss = loss_sum / static_cast<double>(train.size());
    m.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());

    // Stage II: PQ-guided rewiring.
    const bool rewire_epoch = epoch % config.epoch_frequency == 0;
    if (rewire_epoch || config.log_pq_every_epoch) {
      for (std::size_t l = 0; l < layers.size(); ++l) {
        if (exempt(config, l)) continue;
        auto reports = measure_layer(layers[l], config.scope, config.pq, l);
        if (rewire_epoch) {
          auto events = rewire_step(layers[l], reports, config.regrow_fraction, epoch);
          std::move(events.begin(), events.end(), std::back_inserter(m.events));
        }
        std::move(reports.begin(), reports.end(), std::back_inserter(m.pq_reports));
      }
      check_layers(layers, density_cap, epoch, "stage II");
    }

    for (const auto& layer : layers) m.density.push_back(density(layer.mask));
    Rng test_rng = root.split(kTestEncode).split(epoch);
    const Evaluation ev = evaluate(layers, test, config, test_rng);
    m.test_accuracy = ev.accuracy;
    m.sops = ev.sops;
    if (observer) observer(m, layers);
    result.metrics.push_back(std::move(m));
  }
  return result;
}

}  // namespace dsnn
