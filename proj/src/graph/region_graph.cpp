#include "dpmrf/graph/region_graph.hpp"

#include <functional>

#include "dpmrf/dpp/kernels.hpp"
#include "dpmrf/error.hpp"

namespace dpmrf {

RegionGraph build_region_graph(const dpp::Backend& backend, const GrayImage& image,
                               const LabelMap& labels) {
  if (image.width != labels.width || image.height != labels.height)
    throw InputError("region graph: image and label map dimensions differ");
  if (labels.num_regions == 0) throw InputError("region graph: label map not validated");
  const std::size_t n = image.size();
  const std::uint32_t w = image.width;
  const std::uint32_t R = labels.num_regions;
  const auto& reg = labels.region;

  // Directed boundary pairs (both orientations) from 4-adjacent pixels in
  // different regions; right and down arcs cover every pixel pair once.
  const auto counts = dpp::map_indexed(backend, n, [&](std::size_t i) -> std::uint32_t {
    const std::uint32_t x = static_cast<std::uint32_t>(i % w);
    std::uint32_t c = 0;
    if (x + 1 < w && reg[i] != reg[i + 1]) c += 2;
    if (i + w < n && reg[i] != reg[i + w]) c += 2;
    return c;
  });
  const auto pair_offsets = dpp::offsets_from_counts(backend, counts);
  std::vector<std::uint64_t> pairs(pair_offsets.back());
  dpp::for_each_index(backend, n, [&](std::size_t i) {
    const std::uint32_t x = static_cast<std::uint32_t>(i % w);
    std::size_t slot = pair_offsets[i];
    const auto emit = [&](std::uint32_t a, std::uint32_t b) {
      pairs[slot++] = (std::uint64_t(a) << 32) | b;
      pairs[slot++] = (std::uint64_t(b) << 32) | a;
    };
    if (x + 1 < w && reg[i] != reg[i + 1]) emit(reg[i], reg[i + 1]);
    if (i + w < n && reg[i] != reg[i + w]) emit(reg[i], reg[i + w]);
  });

  const auto sorted =
      dpp::sort_by_key(backend, pairs, std::vector<std::uint8_t>(pairs.size(), 0));
  const auto edges = dpp::unique(backend, sorted.keys);

  RegionGraph g;
  g.num_vertices = R;
  g.neighbors =
      dpp::map(backend, edges, [](const std::uint64_t& e) { return static_cast<std::uint32_t>(e); });
  const auto srcs = dpp::map(backend, edges, [](const std::uint64_t& e) {
    return static_cast<std::uint32_t>(e >> 32);
  });
  const auto degs = dpp::reduce_by_key(backend, srcs, std::vector<std::uint32_t>(srcs.size(), 1u),
                                       std::plus<std::uint32_t>{});
  const auto degree = dpp::scatter(backend, degs.values, degs.keys, R, 0u);
  g.offsets = dpp::offsets_from_counts(backend, degree);

  // Region sizes and integer intensity sums; one division per region at the
  // end keeps means exact with respect to the pixel data.
  const auto by_region = dpp::sort_by_key(
      backend, reg, dpp::map(backend, image.pixels, [](const std::uint8_t& p) {
        return static_cast<std::uint64_t>(p);
      }));
  const auto sums =
      dpp::reduce_by_key(backend, by_region.keys, by_region.values, std::plus<std::uint64_t>{});
  const auto cnts = dpp::reduce_by_key(backend, by_region.keys,
                                       std::vector<std::uint32_t>(n, 1u), std::plus<std::uint32_t>{});
  g.region_size = cnts.values;  // a validated map uses every id, so runs are 0..R-1
  g.region_mean = dpp::map_indexed(backend, R, [&](std::size_t r) {
    return static_cast<double>(sums.values[r]) / static_cast<double>(g.region_size[r]);
  });
  return g;
}

}  // namespace dpmrf
