#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsnn/sparse_layer.hpp"
#include "dsnn/sparsity.hpp"

namespace dsnn {

// Flat index range [begin, end) of a scope group.
struct GroupRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct RewireEvent {
  std::size_t epoch = 0;
  ScopeId scope;
  std::size_t prune_count = 0;
  std::size_t regrow_count = 0;
  std::size_t regrow_shortfall = 0;  // requested regrowths with no eligible slot
  std::vector<std::size_t> pruned_indices;
  std::vector<std::size_t> regrown_indices;
  double density_before = 0.0;  // of the group
  double density_after = 0.0;
};

// Deactivates the k active entries of the range with the smallest |w|
// (lower flat index first on ties) and zeroes their weights. Momentum is kept.
std::vector<std::size_t> prune_by_magnitude(SparseLayer& layer, GroupRange group, std::size_t k);

struct RegrowResult {
  std::vector<std::size_t> indices;
  std::size_t shortfall = 0;
};

// Activates up to k inactive entries of the range with the largest |momentum|,
// excluding `forbidden` (sorted or not). Regrown weights start at 0.
RegrowResult regrow_by_momentum(SparseLayer& layer, GroupRange group, std::size_t k,
                                std::span<const std::size_t> forbidden);

// One structural update of a layer: per report, prune prune_count entries and
// regrow floor(regrow_fraction * prune_count), never re-activating an entry
// pruned in the same event. All reports are checked against the current mask
// before anything is mutated.
std::vector<RewireEvent> rewire_step(SparseLayer& layer, std::span<const PqReport> reports,
                                     double regrow_fraction, std::size_t epoch = 0);

}  // namespace dsnn
