#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dpmrf {

/// Row-major 8-bit grayscale image.
struct GrayImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::size_t size() const { return pixels.size(); }
  std::uint8_t at(std::uint32_t x, std::uint32_t y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

/// Row-major binary image; values are strictly 0 or 1 (1 = pore/positive).
struct BinaryImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::size_t size() const { return pixels.size(); }
};

// Binary PGM (P5, maxval 255). Comments in the header are accepted on read.
GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);

// Binary images travel as PGM with 0 = negative/solid and 255 = positive/pore;
// reading rejects any other pixel value.
BinaryImage read_binary_pgm(const std::string& path);
void write_binary_pgm(const BinaryImage& image, const std::string& path);

}  // namespace dpmrf
