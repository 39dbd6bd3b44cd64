#include "dpmrf/graph/label_map.hpp"

#include <cstring>
#include <fstream>
#include <numeric>
#include <vector>

#include "dpmrf/error.hpp"

namespace dpmrf {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

}  // namespace

void validate_label_map(LabelMap& map) {
  const std::size_t n = static_cast<std::size_t>(map.width) * map.height;
  if (map.region.size() != n) throw InputError("label map: size does not match dimensions");
  if (n == 0) throw InputError("label map: empty");

  std::uint32_t max_id = 0;
  for (std::uint32_t id : map.region) max_id = std::max(max_id, id);
  const std::uint32_t num = max_id + 1;

  // Every id in [0, max] must be used.
  std::vector<std::uint8_t> used(num, 0);
  for (std::uint32_t id : map.region) used[id] = 1;
  for (std::uint32_t id = 0; id < num; ++id)
    if (!used[id]) throw InputError("label map: region id " + std::to_string(id) + " unused");

  // Each region must be one 4-connected component: union pixels within a
  // region, then check each region has a single root.
  UnionFind uf(n);
  const std::uint32_t w = map.width;
  const std::uint32_t h = map.height;
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w && map.region[i] == map.region[i + 1]) uf.unite(i, i + 1);
      if (y + 1 < h && map.region[i] == map.region[i + w]) uf.unite(i, i + w);
    }
  }
  std::vector<std::uint32_t> root_of(num, 0xFFFFFFFFu);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t id = map.region[i];
    const std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
    if (root_of[id] == 0xFFFFFFFFu) {
      root_of[id] = r;
    } else if (root_of[id] != r) {
      throw InputError("label map: region " + std::to_string(id) + " is not 4-connected");
    }
  }

  map.num_regions = num;
}

LabelMap grid_oversegment(std::uint32_t width, std::uint32_t height, std::uint32_t block_size) {
  if (block_size == 0) throw InputError("oversegment: block size must be positive");
  if (width == 0 || height == 0) throw InputError("oversegment: zero dimension");
  LabelMap map;
  map.width = width;
  map.height = height;
  const std::uint32_t bx = (width + block_size - 1) / block_size;
  const std::uint32_t by = (height + block_size - 1) / block_size;
  map.region.resize(static_cast<std::size_t>(width) * height);
  for (std::uint32_t y = 0; y < height; ++y)
    for (std::uint32_t x = 0; x < width; ++x)
      map.region[static_cast<std::size_t>(y) * width + x] =
          (y / block_size) * bx + (x / block_size);
  map.num_regions = bx * by;
  return map;
}

namespace {

std::uint32_t read_u32le(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw InputError(path + ": truncated");
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

void write_u32le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

LabelMap read_rlm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "RLM1", 4) != 0)
    throw InputError(path + ": not an RLM1 file");
  LabelMap map;
  map.width = read_u32le(in, path);
  map.height = read_u32le(in, path);
  if (map.width == 0 || map.height == 0) throw InputError(path + ": zero dimension");
  const std::uint64_t n = std::uint64_t(map.width) * map.height;
  if (n > (1ull << 31)) throw InputError(path + ": image too large");
  map.region.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < map.region.size(); ++i) map.region[i] = read_u32le(in, path);
  validate_label_map(map);
  return map;
}

void write_rlm(const LabelMap& map, const std::string& path) {
  if (map.region.size() != static_cast<std::size_t>(map.width) * map.height)
    throw InputError("rlm write: region buffer does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write("RLM1", 4);
  write_u32le(out, map.width);
  write_u32le(out, map.height);
  for (std::uint32_t id : map.region) write_u32le(out, id);
  if (!out) throw InputError("rlm write failed: " + path);
}

}  // namespace dpmrf
