#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "dsnn/rng.hpp"
#include "dsnn/tensor.hpp"

namespace dsnn {

enum class Split { kTrain, kTest };

struct Dataset {
  Tensor features;  // [num_samples, dim], values in [0, 1]
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;
  Split split = Split::kTrain;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const { return features.rank() == 2 ? features.dim(1) : 0; }

  // Throws ArgumentError on out-of-range labels or features.
  void validate() const;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// Big-endian IDX pair: images (ubyte, [n, rows, cols]) scaled by 1/255, labels (ubyte, [n]).
// num_classes is max(label) + 1, or `num_classes` when that is larger.
Dataset idx_load(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, Split split = Split::kTrain,
                 std::size_t num_classes = 0);

// Writes features quantized as round(255 f) with rows = 1, cols = dim unless
// rows * cols == dim is given explicitly.
void idx_write(const Dataset& dataset, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path, std::size_t rows = 1,
               std::size_t cols = 0);

// Separable Poisson-rate classification task.
//
// Class prototypes place every coordinate on an evenly spaced level grid in
// [0.05, 0.95] whose spacing is at least `separation`; distinct prototypes
// therefore differ by at least `separation` in L∞. Samples add uniform noise
// in [-0.05, 0.05] and are clamped to [0, 1]. Per class, the first 80% of
// samples go to train and the rest to test.
std::pair<Dataset, Dataset> synth_poisson(std::size_t num_classes, std::size_t dim,
                                          std::size_t samples_per_class, double separation,
                                          Rng& rng);

enum class Encoding { kRate, kDirect };

// [T, batch, dim]; rate draws Bernoulli(feature) per step, direct repeats the value.
Tensor encode(const Tensor& features, std::size_t steps, Encoding mode, Rng& rng);

struct SpikeBatch {
  Tensor spikes;
  std::vector<std::size_t> labels;
};

// Rows `indices` of the dataset, encoded.
SpikeBatch make_batch(const Dataset& dataset, std::span<const std::size_t> indices,
                      std::size_t steps, Encoding mode, Rng& rng);

// Sample-index batches covering the dataset once; the last may be short.
std::vector<std::vector<std::size_t>> batches(const Dataset& dataset, std::size_t batch_size,
                                              bool shuffle, Rng& rng);

}  // namespace dsnn
