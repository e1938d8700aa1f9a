#include "dsnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (product(shape_) != data_.size()) {
    throw DimensionError("tensor shape " + shape_string(shape_) + " does not hold " +
                         std::to_string(data_.size()) + " elements");
  }
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    if (row.size() != n_cols) throw DimensionError("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({n_rows, n_cols}, std::move(data));
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw DimensionError("axis " + std::to_string(axis) + " out of range for shape " +
                         shape_string(shape_));
  }
  return shape_[axis];
}

double& Tensor::at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
double Tensor::at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

double& Tensor::at(std::size_t i, std::size_t j, std::size_t k) {
  return data_[(i * shape_[1] + j) * shape_[2] + k];
}
double Tensor::at(std::size_t i, std::size_t j, std::size_t k) const {
  return data_[(i * shape_[1] + j) * shape_[2] + k];
}

std::size_t Tensor::stride0() const noexcept {
  if (shape_.empty() || shape_[0] == 0) return 0;
  return data_.size() / shape_[0];
}

std::span<double> Tensor::slab(std::size_t index) {
  const std::size_t stride = stride0();
  return std::span<double>(data_).subspan(index * stride, stride);
}

std::span<const double> Tensor::slab(std::size_t index) const {
  const std::size_t stride = stride0();
  return std::span<const double>(data_).subspan(index * stride, stride);
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ConstMatrixView as_matrix(const Tensor& t) {
  if (t.rank() != 2) throw DimensionError("expected a matrix, got shape " + shape_string(t.shape()));
  return {t.data(), t.dim(0), t.dim(1)};
}

MatrixView as_matrix(Tensor& t) {
  if (t.rank() != 2) throw DimensionError("expected a matrix, got shape " + shape_string(t.shape()));
  return {t.data(), t.dim(0), t.dim(1)};
}

void gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols) {
    throw DimensionError("gemm: [" + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         "] * [" + std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                         "] -> [" + std::to_string(c.rows) + "x" + std::to_string(c.cols) + "]");
  }
  const std::size_t n = b.cols;
  if (!accumulate) std::fill(c.data.begin(), c.data.end(), 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* out = c.data.data() + i * n;
    const double* a_row = a.data.data() + i * a.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double scale = a_row[k];
      if (scale == 0.0) continue;
      const double* b_row = b.data.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += scale * b_row[j];
    }
  }
}

void gemm_tn(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols) {
    throw DimensionError("gemm_tn: [" + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         "]^T * [" + std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                         "] -> [" + std::to_string(c.rows) + "x" + std::to_string(c.cols) + "]");
  }
  const std::size_t n = b.cols;
  if (!accumulate) std::fill(c.data.begin(), c.data.end(), 0.0);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* a_row = a.data.data() + k * a.cols;
    const double* b_row = b.data.data() + k * n;
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double scale = a_row[i];
      if (scale == 0.0) continue;
      double* out = c.data.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += scale * b_row[j];
    }
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError("matmul expects matrices, got " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()));
  }
  if (a.dim(1) != b.dim(0)) {
    throw DimensionError("matmul inner dimensions differ: " + shape_string(a.shape()) + " x " +
                         shape_string(b.shape()));
  }
  Tensor c({a.dim(0), b.dim(1)});
  gemm(as_matrix(a), as_matrix(b), as_matrix(c));
  return c;
}

Tensor transpose(const Tensor& m) {
  const ConstMatrixView v = as_matrix(m);
  Tensor out({v.cols, v.rows});
  for (std::size_t i = 0; i < v.rows; ++i) {
    for (std::size_t j = 0; j < v.cols; ++j) out[j * v.rows + i] = v.data[i * v.cols + j];
  }
  return out;
}

std::vector<std::size_t> topk_indices(std::span<const double> values, std::size_t k,
                                      SelectOrder order, SelectKey key) {
  if (k > values.size()) {
    throw ArgumentError("topk_indices: k=" + std::to_string(k) + " exceeds length " +
                        std::to_string(values.size()));
  }
  auto key_of = [&](std::size_t i) {
    return key == SelectKey::kAbs ? std::abs(values[i]) : values[i];
  };
  auto before = [&](std::size_t lhs, std::size_t rhs) {
    const double kl = key_of(lhs);
    const double kr = key_of(rhs);
    if (kl != kr) return order == SelectOrder::kLargest ? kl > kr : kl < kr;
    return lhs < rhs;
  };
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
  idx.resize(k);
  return idx;
}

}  // namespace dsnn
