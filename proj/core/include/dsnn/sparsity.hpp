#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsnn/sparse_layer.hpp"

namespace dsnn {

struct PqParams {
  double p = 1.0;
  double q = 2.0;
  double alpha_r = 0.001;
  double gamma = 1.0;
  double beta = 0.9;

  void validate() const;
};

// Which entries of the vector count toward d.
//   kNonzero:    zeros are dropped; d = number of nonzero entries.
//   kFullLength: d = length of the vector as given, zeros included.
// The training pipeline hands pq_index the weights under active mask bits
// with kFullLength, so d = |M| for the group.
enum class PqSupport { kNonzero, kFullLength };

// 1 - d^(1/q - 1/p) * ||w||_p / ||w||_q.
// Throws DegenerateInputError when w has no nonzero entry.
double pq_index(std::span<const double> w, const PqParams& params,
                PqSupport support = PqSupport::kNonzero);

// Real-valued lower bound on the number of parameters to retain:
//   d (1 + alpha_r)^(-q/(q-p)) (1 - I)^(pq/(q-p)), clamped to [0, d].
double lower_bound(std::size_t d, double index, const PqParams& params);

struct RewiringRatio {
  std::size_t prune_count = 0;
  double ratio = 0.0;
};

// prune_count = floor(d * min(gamma (1 - r/d), beta)); ratio = prune_count / total.
RewiringRatio rewiring_ratio(std::size_t d, double r, std::size_t total, const PqParams& params);

enum class Scope { kLayer, kNeuron };

struct ScopeId {
  std::size_t layer = 0;
  std::optional<std::size_t> neuron;

  std::string str() const;
  friend bool operator==(const ScopeId&, const ScopeId&) = default;
};

// Contiguous range [begin, end) of flat weight indices forming one group.
struct ScopeGroup {
  ScopeId id;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<double> values;  // weights under active mask bits, in index order
  std::size_t d = 0;           // active entries
  std::size_t total = 0;       // N, all entries in the group
  bool skip = false;           // no nonzero active weight to measure

  std::size_t size() const noexcept { return end - begin; }
};

std::vector<ScopeGroup> scope_groups(const SparseLayer& layer, Scope scope,
                                     std::size_t layer_index = 0);

struct PqReport {
  ScopeId scope;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t d = 0;
  std::size_t total = 0;
  double index = 0.0;
  double r = 0.0;
  std::size_t prune_count = 0;
  double ratio = 0.0;
  bool skip = false;
};

// scope_groups -> pq_index -> lower_bound -> rewiring_ratio for every group,
// in scope order. Skipped groups carry prune_count 0.
std::vector<PqReport> measure_layer(const SparseLayer& layer, Scope scope, const PqParams& params,
                                    std::size_t layer_index = 0);

}  // namespace dsnn
