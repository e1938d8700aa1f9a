#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dsnn/sparse_layer.hpp"

namespace dsnn {

// Binary layout, all integers and floats little-endian:
//   "SNNW"  u16 version  u16 layer_count
//   per layer: u32 n_post, u32 n_pre,
//              f64 weights[n_post * n_pre] (row-major),
//              mask bits packed LSB-first, row-major, padded to a whole byte,
//              f64 momentum[n_post * n_pre]
inline constexpr std::uint16_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(std::span<const SparseLayer> layers);
std::vector<SparseLayer> decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(std::span<const SparseLayer> layers, const std::filesystem::path& path);
std::vector<SparseLayer> load_checkpoint(const std::filesystem::path& path);

}  // namespace dsnn
