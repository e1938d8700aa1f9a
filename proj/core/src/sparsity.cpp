#include "dsnn/sparsity.hpp"

#include <algorithm>
#include <cmath>

#include "dsnn/error.hpp"

namespace dsnn {

void PqParams::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw ArgumentError("p must be positive");
  if (!(q > p) || !std::isfinite(q)) throw ArgumentError("q must exceed p");
  if (!(alpha_r >= 0.0) || !std::isfinite(alpha_r)) throw ArgumentError("alpha_r must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ArgumentError("gamma must be >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw ArgumentError("beta must lie in (0, 1]");
}

double pq_index(std::span<const double> w, const PqParams& params, PqSupport support) {
  double peak = 0.0;
  std::size_t nonzero = 0;
  for (double v : w) {
    if (!std::isfinite(v)) throw NumericError("pq_index: non-finite weight");
    if (v != 0.0) {
      ++nonzero;
      peak = std::max(peak, std::abs(v));
    }
  }
  if (nonzero == 0) throw DegenerateInputError("pq_index: vector has no nonzero entry");
  const std::size_t d = support == PqSupport::kNonzero ? nonzero : w.size();

  // Norms of w / max|w|; the ratio is scale-free and this keeps the powers in range.
  double sum_p = 0.0;
  double sum_q = 0.0;
  for (double v : w) {
    if (v == 0.0) continue;
    const double x = std::abs(v) / peak;
    sum_p += std::pow(x, params.p);
    sum_q += std::pow(x, params.q);
  }
  const double norm_p = std::pow(sum_p, 1.0 / params.p);
  const double norm_q = std::pow(sum_q, 1.0 / params.q);
  const double scale = std::pow(static_cast<double>(d), 1.0 / params.q - 1.0 / params.p);
  return 1.0 - scale * norm_p / norm_q;
}

double lower_bound(std::size_t d, double index, const PqParams& params) {
  const double span = params.q - params.p;
  const double slack = std::pow(1.0 + params.alpha_r, -params.q / span);
  const double kept = std::clamp(1.0 - index, 0.0, 1.0);
  const double r = static_cast<double>(d) * slack * std::pow(kept, params.p * params.q / span);
  return std::clamp(r, 0.0, static_cast<double>(d));
}

RewiringRatio rewiring_ratio(std::size_t d, double r, std::size_t total, const PqParams& params) {
  if (total == 0) throw ArgumentError("rewiring_ratio: group has no parameters");
  if (d > total) throw ArgumentError("rewiring_ratio: active count exceeds group size");
  if (d == 0) return {};
  const double dd = static_cast<double>(d);
  const double fraction = std::min(params.gamma * (1.0 - r / dd), params.beta);
  const double raw = std::floor(dd * std::max(fraction, 0.0));
  const auto prune = std::min(d, static_cast<std::size_t>(raw));
  return {prune, static_cast<double>(prune) / static_cast<double>(total)};
}

std::string ScopeId::str() const {
  std::string out = "L" + std::to_string(layer);
  if (neuron) out += ":N" + std::to_string(*neuron);
  return out;
}

std::vector<ScopeGroup> scope_groups(const SparseLayer& layer, Scope scope,
                                     std::size_t layer_index) {
  const std::size_t rows = layer.n_post();
  const std::size_t cols = layer.n_pre();
  auto make = [&](ScopeId id, std::size_t begin, std::size_t end) {
    ScopeGroup g;
    g.id = id;
    g.begin = begin;
    g.end = end;
    g.total = end - begin;
    bool any_nonzero = false;
    for (std::size_t i = begin; i < end; ++i) {
      if (!layer.mask.active(i)) continue;
      g.values.push_back(layer.weights[i]);
      any_nonzero = any_nonzero || layer.weights[i] != 0.0;
    }
    g.d = g.values.size();
    g.skip = !any_nonzero;
    return g;
  };

  std::vector<ScopeGroup> groups;
  if (scope == Scope::kLayer) {
    groups.push_back(make(ScopeId{layer_index, std::nullopt}, 0, rows * cols));
  } else {
    groups.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      groups.push_back(make(ScopeId{layer_index, i}, i * cols, (i + 1) * cols));
    }
  }
  return groups;
}

std::vector<PqReport> measure_layer(const SparseLayer& layer, Scope scope, const PqParams& params,
                                    std::size_t layer_index) {
  params.validate();
  std::vector<PqReport> reports;
  for (const ScopeGroup& g : scope_groups(layer, scope, layer_index)) {
    PqReport rep;
    rep.scope = g.id;
    rep.begin = g.begin;
    rep.end = g.end;
    rep.d = g.d;
    rep.total = g.total;
    rep.skip = g.skip;
    if (!g.skip) {
      rep.index = pq_index(g.values, params, PqSupport::kFullLength);
      rep.r = lower_bound(g.d, rep.index, params);
      const RewiringRatio rr = rewiring_ratio(g.d, rep.r, g.total, params);
      rep.prune_count = rr.prune_count;
      rep.ratio = rr.ratio;
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace dsnn
