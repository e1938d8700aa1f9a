#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>

#include "dsnn/data.hpp"
#include "dsnn/train.hpp"

namespace dsnn {

struct DatasetSpec {
  enum class Kind { kMnist, kSynthetic };
  Kind kind = Kind::kSynthetic;

  // mnist
  std::filesystem::path images;
  std::filesystem::path labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
  std::size_t train_limit = 0;  // 0 = all samples
  std::size_t test_limit = 0;

  // synthetic
  std::size_t classes = 4;
  std::size_t dim = 64;
  std::size_t per_class = 500;
  double separation = 0.3;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
};

struct RunConfig {
  TrainConfig train;
  DatasetSpec dataset;
  std::filesystem::path output_dir;
};

// Parses and validates a JSON run configuration. Relative paths are resolved
// against `base_dir`. Unknown keys, wrong types and out-of-range values throw
// ConfigError naming the key.
RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Train and test splits described by `spec`.
std::pair<Dataset, Dataset> load_datasets(const DatasetSpec& spec, std::uint64_t run_seed);

}  // namespace dsnn
