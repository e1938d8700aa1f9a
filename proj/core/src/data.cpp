#include "dsnn/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) throw LengthError(path.string() + ": truncated IDX header");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

void check_magic(std::uint32_t magic, std::uint32_t expected, const std::filesystem::path& path) {
  if (magic != expected) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "bad magic 0x%08x (expected 0x%08x)", magic, expected);
    throw FormatError(path.string() + ": " + buf);
  }
}

}  // namespace

void Dataset::validate() const {
  if (features.rank() != 2 || features.dim(0) != labels.size()) {
    throw DimensionError("dataset features " + shape_string(features.shape()) + " vs " +
                         std::to_string(labels.size()) + " labels");
  }
  for (std::size_t y : labels) {
    if (y >= num_classes) throw ArgumentError("label " + std::to_string(y) + " out of range");
  }
  for (double f : features.data()) {
    if (!(f >= 0.0 && f <= 1.0)) throw ArgumentError("feature outside [0, 1]");
  }
}

Dataset idx_load(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, Split split,
                 std::size_t num_classes) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);

  check_magic(read_be32(images, 0, images_path), kIdxImagesMagic, images_path);
  const std::size_t n = read_be32(images, 4, images_path);
  const std::size_t rows = read_be32(images, 8, images_path);
  const std::size_t cols = read_be32(images, 12, images_path);
  const std::size_t dim = rows * cols;
  if (images.size() < 16 + n * dim) {
    throw LengthError(images_path.string() + ": expected " + std::to_string(n * dim) +
                      " pixel bytes, found " + std::to_string(images.size() - 16));
  }

  check_magic(read_be32(labels, 0, labels_path), kIdxLabelsMagic, labels_path);
  const std::size_t n_labels = read_be32(labels, 4, labels_path);
  if (labels.size() < 8 + n_labels) {
    throw LengthError(labels_path.string() + ": expected " + std::to_string(n_labels) +
                      " labels, found " + std::to_string(labels.size() - 8));
  }
  if (n_labels != n) {
    throw ConsistencyError("image count " + std::to_string(n) + " != label count " +
                           std::to_string(n_labels));
  }

  Dataset ds;
  ds.split = split;
  ds.features = Tensor({n, dim});
  auto f = ds.features.data();
  for (std::size_t i = 0; i < n * dim; ++i) f[i] = static_cast<double>(images[16 + i]) / 255.0;
  ds.labels.resize(n);
  std::size_t max_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = labels[8 + i];
    max_label = std::max(max_label, ds.labels[i]);
  }
  ds.num_classes = std::max(num_classes, n == 0 ? std::size_t{0} : max_label + 1);
  return ds;
}

void idx_write(const Dataset& dataset, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path, std::size_t rows, std::size_t cols) {
  const std::size_t n = dataset.size();
  const std::size_t dim = dataset.dim();
  if (cols == 0) cols = rows == 0 ? 0 : dim / rows;
  if (rows * cols != dim) throw DimensionError("idx_write: rows * cols must equal dim");
  for (std::size_t y : dataset.labels) {
    if (y > 255) throw ArgumentError("idx_write: label does not fit in a byte");
  }

  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw IoError("cannot write " + images_path.string());
  put_be32(img, kIdxImagesMagic);
  put_be32(img, static_cast<std::uint32_t>(n));
  put_be32(img, static_cast<std::uint32_t>(rows));
  put_be32(img, static_cast<std::uint32_t>(cols));
  std::vector<char> pixels(n * dim);
  auto f = dataset.features.data();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double q = std::round(255.0 * std::clamp(f[i], 0.0, 1.0));
    pixels[i] = static_cast<char>(static_cast<std::uint8_t>(q));
  }
  img.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
  if (!img) throw IoError("write failed: " + images_path.string());

  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw IoError("cannot write " + labels_path.string());
  put_be32(lab, kIdxLabelsMagic);
  put_be32(lab, static_cast<std::uint32_t>(n));
  for (std::size_t y : dataset.labels) lab.put(static_cast<char>(y));
  if (!lab) throw IoError("write failed: " + labels_path.string());
}

std::pair<Dataset, Dataset> synth_poisson(std::size_t num_classes, std::size_t dim,
                                          std::size_t samples_per_class, double separation,
                                          Rng& rng) {
  if (num_classes < 2) throw ArgumentError("synth_poisson needs at least 2 classes");
  if (dim < num_classes) throw ArgumentError("synth_poisson needs dim >= classes");
  constexpr double kLow = 0.05;
  constexpr double kHigh = 0.95;
  constexpr double kNoise = 0.05;
  constexpr int kRetries = 1000;
  if (!(separation > 0.0) || separation > kHigh - kLow + 1e-12) {
    throw GenerationError("separation must lie in (0, 0.9]");
  }
  const auto levels =
      std::min<std::size_t>(256, static_cast<std::size_t>((kHigh - kLow) / separation + 1e-9) + 1);
  const double spacing = (kHigh - kLow) / static_cast<double>(levels - 1);

  Rng proto_rng = rng.split(1);
  std::vector<std::vector<double>> prototypes;
  for (std::size_t c = 0; c < num_classes; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
      std::vector<double> candidate(dim);
      for (auto& v : candidate) v = kLow + spacing * static_cast<double>(proto_rng.below(levels));
      placed = std::all_of(prototypes.begin(), prototypes.end(), [&](const auto& other) {
        double dist = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dist = std::max(dist, std::abs(other[j] - candidate[j]));
        return dist >= separation - 1e-12;
      });
      if (placed) prototypes.push_back(std::move(candidate));
    }
    if (!placed) {
      throw GenerationError("could not place prototype " + std::to_string(c) +
                            " at separation " + std::to_string(separation));
    }
  }

  const std::size_t n_train = samples_per_class * 4 / 5;
  const std::size_t n_test = samples_per_class - n_train;
  Dataset train;
  Dataset test;
  train.split = Split::kTrain;
  test.split = Split::kTest;
  train.num_classes = test.num_classes = num_classes;
  train.features = Tensor({num_classes * n_train, dim});
  test.features = Tensor({num_classes * n_test, dim});

  Rng noise_rng = rng.split(2);
  std::size_t train_row = 0;
  std::size_t test_row = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t s = 0; s < samples_per_class; ++s) {
      const bool to_train = s < n_train;
      Dataset& dst = to_train ? train : test;
      const std::size_t row = to_train ? train_row++ : test_row++;
      for (std::size_t j = 0; j < dim; ++j) {
        const double v = prototypes[c][j] + noise_rng.uniform(-kNoise, kNoise);
        dst.features.at(row, j) = std::clamp(v, 0.0, 1.0);
      }
      dst.labels.push_back(c);
    }
  }
  return {std::move(train), std::move(test)};
}

Tensor encode(const Tensor& features, std::size_t steps, Encoding mode, Rng& rng) {
  const ConstMatrixView f = as_matrix(features);
  for (double v : f.data) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("encode: feature outside [0, 1]");
  }
  Tensor out({steps, f.rows, f.cols});
  for (std::size_t t = 0; t < steps; ++t) {
    auto slab = out.slab(t);
    if (mode == Encoding::kDirect) {
      std::copy(f.data.begin(), f.data.end(), slab.begin());
    } else {
      for (std::size_t i = 0; i < slab.size(); ++i) slab[i] = rng.bernoulli(f.data[i]) ? 1.0 : 0.0;
    }
  }
  return out;
}

SpikeBatch make_batch(const Dataset& dataset, std::span<const std::size_t> indices,
                      std::size_t steps, Encoding mode, Rng& rng) {
  const std::size_t dim = dataset.dim();
  Tensor rows({indices.size(), dim});
  SpikeBatch batch;
  batch.labels.reserve(indices.size());
  for (std::size_t b = 0; b < indices.size(); ++b) {
    auto src = dataset.features.slab(indices[b]);
    std::copy(src.begin(), src.end(), rows.slab(b).begin());
    batch.labels.push_back(dataset.labels[indices[b]]);
  }
  batch.spikes = encode(rows, steps, mode, rng);
  return batch;
}

std::vector<std::vector<std::size_t>> batches(const Dataset& dataset, std::size_t batch_size,
                                              bool shuffle, Rng& rng) {
  if (batch_size == 0) throw ArgumentError("batch_size must be at least 1");
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t stop = std::min(order.size(), start + batch_size);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return out;
}

}  // namespace dsnn
