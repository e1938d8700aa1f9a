#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dsnn {

// Dense row-major array of doubles with shape metadata.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  // Builds a 2-D tensor from nested rows; all rows must have equal length.
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor vector(std::vector<double> values);

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;
  double& at(std::size_t i, std::size_t j, std::size_t k);
  double at(std::size_t i, std::size_t j, std::size_t k) const;

  // Contiguous slice of the leading axis, e.g. one time step of a [T, B, n] tensor.
  std::span<double> slab(std::size_t index);
  std::span<const double> slab(std::size_t index) const;

  Tensor reshaped(std::vector<std::size_t> shape) const;
  void fill(double value);
  bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t stride0() const noexcept;

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string shape_string(const std::vector<std::size_t>& shape);

// Row-major views used by the matrix kernels.
struct MatrixView {
  std::span<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct ConstMatrixView {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  ConstMatrixView() = default;
  ConstMatrixView(std::span<const double> d, std::size_t r, std::size_t c)
      : data(d), rows(r), cols(c) {}
  ConstMatrixView(MatrixView v) : data(v.data), rows(v.rows), cols(v.cols) {}  // NOLINT
};

ConstMatrixView as_matrix(const Tensor& t);
MatrixView as_matrix(Tensor& t);

// c (+)= a * b. Each output element accumulates over k in ascending order;
// zero entries of `a` are skipped, which cannot change any finite sum.
void gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate = false);

// c (+)= a^T * b, accumulating over the shared leading dimension in ascending order.
void gemm_tn(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate = false);

// Standard matrix product of two 2-D tensors.
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& m);

enum class SelectOrder { kLargest, kSmallest };
enum class SelectKey { kAbs, kSigned };

// Indices of the k extreme entries, sorted by key rank then by index.
// Ties are broken toward the lower index.
std::vector<std::size_t> topk_indices(std::span<const double> values, std::size_t k,
                                      SelectOrder order, SelectKey key);

}  // namespace dsnn
