#include "dsnn/sparse_layer.hpp"

#include <cmath>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

void check_shape(const Tensor& t, const Mask& m, const char* what) {
  if (t.rank() != 2 || t.dim(0) != m.n_post() || t.dim(1) != m.n_pre()) {
    throw DimensionError(std::string(what) + " shape " + shape_string(t.shape()) +
                         " does not match mask " + shape_string({m.n_post(), m.n_pre()}));
  }
}

}  // namespace

SparseLayer::SparseLayer(Tensor w, Mask m)
    : weights(std::move(w)), mask(std::move(m)), momentum({mask.n_post(), mask.n_pre()}) {
  check_shape(weights, mask, "weights");
}

SparseLayer::SparseLayer(Tensor w, Mask m, Tensor mom)
    : weights(std::move(w)), mask(std::move(m)), momentum(std::move(mom)) {
  check_shape(weights, mask, "weights");
  check_shape(momentum, mask, "momentum");
}

void SparseLayer::enforce_mask() noexcept {
  auto w = weights.data();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!mask.active(i)) w[i] = 0.0;
  }
}

double SparseLayer::inactive_magnitude() const noexcept {
  double total = 0.0;
  auto w = weights.data();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!mask.active(i)) total += std::abs(w[i]);
  }
  return total;
}

Tensor SparseLayer::effective_weights() const {
  Tensor out = weights;
  auto w = out.data();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!mask.active(i)) w[i] = 0.0;
  }
  return out;
}

Tensor SparseLayer::effective_weights_transposed() const {
  const std::size_t rows = n_post();
  const std::size_t cols = n_pre();
  Tensor out({cols, rows});
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t flat = i * cols + j;
      out[j * rows + i] = mask.active(flat) ? weights[flat] : 0.0;
    }
  }
  return out;
}

SparseLayer make_layer(Mask mask, Rng& rng) {
  const std::size_t rows = mask.n_post();
  const std::size_t cols = mask.n_pre();
  const double fan_in = std::max(1.0, density(mask) * static_cast<double>(cols));
  const double bound = std::sqrt(6.0 / fan_in);
  Tensor w({rows, cols});
  for (auto& v : w.data()) v = rng.uniform(-bound, bound);
  SparseLayer layer(std::move(w), std::move(mask));
  layer.enforce_mask();
  return layer;
}

}  // namespace dsnn
