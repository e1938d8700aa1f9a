#include "dsnn/rewire.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsnn/error.hpp"
#include "dsnn/tensor.hpp"

namespace dsnn {

namespace {

void check_range(const SparseLayer& layer, GroupRange group) {
  if (group.begin > group.end || group.end > layer.mask.size()) {
    throw ArgumentError("group range [" + std::to_string(group.begin) + ", " +
                        std::to_string(group.end) + ") outside layer of size " +
                        std::to_string(layer.mask.size()));
  }
}

double group_density(const Mask& mask, GroupRange group) {
  const std::size_t n = group.end - group.begin;
  if (n == 0) return 0.0;
  return static_cast<double>(mask.nnz(group.begin, group.end)) / static_cast<double>(n);
}

}  // namespace

std::vector<std::size_t> prune_by_magnitude(SparseLayer& layer, GroupRange group, std::size_t k) {
  check_range(layer, group);
  std::vector<std::size_t> candidates;
  std::vector<double> magnitudes;
  for (std::size_t i = group.begin; i < group.end; ++i) {
    if (!layer.mask.active(i)) continue;
    candidates.push_back(i);
    magnitudes.push_back(layer.weights[i]);
  }
  if (k > candidates.size()) {
    throw ArgumentError("prune_by_magnitude: k=" + std::to_string(k) + " exceeds " +
                        std::to_string(candidates.size()) + " active entries");
  }
  std::vector<std::size_t> pruned;
  pruned.reserve(k);
  for (std::size_t pos : topk_indices(magnitudes, k, SelectOrder::kSmallest, SelectKey::kAbs)) {
    const std::size_t flat = candidates[pos];
    layer.mask.set(flat, false);
    layer.weights[flat] = 0.0;
    pruned.push_back(flat);
  }
  return pruned;
}

RegrowResult regrow_by_momentum(SparseLayer& layer, GroupRange group, std::size_t k,
                                std::span<const std::size_t> forbidden) {
  check_range(layer, group);
  std::vector<std::size_t> barred(forbidden.begin(), forbidden.end());
  std::sort(barred.begin(), barred.end());

  std::vector<std::size_t> candidates;
  std::vector<double> momenta;
  for (std::size_t i = group.begin; i < group.end; ++i) {
    if (layer.mask.active(i) || std::binary_search(barred.begin(), barred.end(), i)) continue;
    candidates.push_back(i);
    momenta.push_back(layer.momentum[i]);
  }
  RegrowResult result;
  const std::size_t take = std::min(k, candidates.size());
  result.shortfall = k - take;
  result.indices.reserve(take);
  for (std::size_t pos : topk_indices(momenta, take, SelectOrder::kLargest, SelectKey::kAbs)) {
    const std::size_t flat = candidates[pos];
    layer.mask.set(flat, true);
    layer.weights[flat] = 0.0;
    result.indices.push_back(flat);
  }
  return result;
}

std::vector<RewireEvent> rewire_step(SparseLayer& layer, std::span<const PqReport> reports,
                                     double regrow_fraction, std::size_t epoch) {
  if (!(regrow_fraction >= 0.0 && regrow_fraction <= 1.0)) {
    throw ArgumentError("regrow_fraction must lie in [0, 1]");
  }
  for (const PqReport& rep : reports) {
    check_range(layer, {rep.begin, rep.end});
    const std::size_t active = layer.mask.nnz(rep.begin, rep.end);
    if (active != rep.d) {
      throw StaleReportError("report " + rep.scope.str() + " was computed for " +
                             std::to_string(rep.d) + " active entries, mask now has " +
                             std::to_string(active));
    }
    if (rep.prune_count > rep.d) {
      throw ArgumentError("report " + rep.scope.str() + " prunes more than its active count");
    }
  }

  std::vector<RewireEvent> events;
  events.reserve(reports.size());
  for (const PqReport& rep : reports) {
    const GroupRange range{rep.begin, rep.end};
    RewireEvent ev;
    ev.epoch = epoch;
    ev.scope = rep.scope;
    ev.density_before = group_density(layer.mask, range);
    const std::size_t k = rep.skip ? 0 : rep.prune_count;
    ev.pruned_indices = prune_by_magnitude(layer, range, k);
    const auto regrow_target =
        static_cast<std::size_t>(std::floor(regrow_fraction * static_cast<double>(k)));
    RegrowResult regrown = regrow_by_momentum(layer, range, regrow_target, ev.pruned_indices);
    ev.regrown_indices = std::move(regrown.indices);
    ev.regrow_shortfall = regrown.shortfall;
    ev.prune_count = ev.pruned_indices.size();
    ev.regrow_count = ev.regrown_indices.size();
    ev.density_after = group_density(layer.mask, range);
    events.push_back(std::move(ev));
  }
  layer.enforce_mask();
  return events;
}

}  // namespace dsnn
