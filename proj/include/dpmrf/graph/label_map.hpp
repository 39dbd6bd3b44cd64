#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dpmrf {

/// Oversegmentation: one region id per pixel, row-major. A valid map uses
/// every id in 0..num_regions-1 at least once and every region is
/// 4-connected.
struct LabelMap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint32_t> region;
  std::uint32_t num_regions = 0;
};

/// Checks contiguous id usage and per-region 4-connectivity, and fills in
/// num_regions. Throws InputError on violations.
void validate_label_map(LabelMap& map);

/// Axis-aligned blocks of block_size^2 pixels (ragged at the right/bottom
/// borders), ids in row-major block order.
LabelMap grid_oversegment(std::uint32_t width, std::uint32_t height, std::uint32_t block_size);

// "RLM1" container: bytes 0-3 ASCII magic, then width and height as u32
// little-endian, then width*height region ids as u32 little-endian.
LabelMap read_rlm(const std::string& path);  // validates before returning
void write_rlm(const LabelMap& map, const std::string& path);

}  // namespace dpmrf
