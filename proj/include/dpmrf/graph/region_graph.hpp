#pragma once

#include <cstdint>
#include <vector>

#include "dpmrf/dpp/backend.hpp"
#include "dpmrf/graph/image.hpp"
#include "dpmrf/graph/label_map.hpp"

namespace dpmrf {

/// Region adjacency graph in CSR form. Neighbor lists are sorted ascending,
/// free of self-loops and duplicates, and symmetric.
struct RegionGraph {
  std::uint32_t num_vertices = 0;
  std::vector<std::uint32_t> offsets;    // num_vertices + 1 entries
  std::vector<std::uint32_t> neighbors;  // flat adjacency
  std::vector<double> region_mean;       // mean pixel intensity per region
  std::vector<std::uint32_t> region_size;

  const std::uint32_t* adj_begin(std::uint32_t v) const { return neighbors.data() + offsets[v]; }
  const std::uint32_t* adj_end(std::uint32_t v) const { return neighbors.data() + offsets[v + 1]; }
  std::uint32_t degree(std::uint32_t v) const { return offsets[v + 1] - offsets[v]; }
};

/// Builds the region adjacency graph: edge (i, j) iff some pixel of region i
/// is 4-adjacent to some pixel of region j. Means are integer-accumulated
/// and divided once. The label map must have been validated.
RegionGraph build_region_graph(const dpp::Backend& backend, const GrayImage& image,
                               const LabelMap& labels);

}  // namespace dpmrf
