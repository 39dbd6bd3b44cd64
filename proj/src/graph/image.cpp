#include "dpmrf/graph/image.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dpmrf/error.hpp"

namespace dpmrf {

namespace {

// Reads the next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

std::uint32_t parse_dim(const std::string& tok, const char* what) {
  if (tok.empty()) throw InputError(std::string("pgm: missing ") + what);
  std::uint64_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') throw InputError(std::string("pgm: bad ") + what + " '" + tok + "'");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    if (v > 0xFFFFFFFFull) throw InputError(std::string("pgm: ") + what + " out of range");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);

  std::string magic = next_token(in);
  if (magic != "P5") throw InputError(path + ": not a binary pgm (P5)");

  GrayImage img;
  img.width = parse_dim(next_token(in), "width");
  img.height = parse_dim(next_token(in), "height");
  std::uint32_t maxval = parse_dim(next_token(in), "maxval");
  if (img.width == 0 || img.height == 0) throw InputError(path + ": zero dimension");
  if (maxval != 255) throw InputError(path + ": unsupported maxval (want 255)");

  // The header terminates with exactly one whitespace byte, already
  // consumed by next_token.
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
    throw InputError(path + ": truncated pixel data");
  return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
    throw InputError("pgm write: pixel buffer does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw InputError("pgm write failed: " + path);
}

BinaryImage read_binary_pgm(const std::string& path) {
  GrayImage g = read_pgm(path);
  BinaryImage b;
  b.width = g.width;
  b.height = g.height;
  b.pixels.resize(g.pixels.size());
  for (std::size_t i = 0; i < g.pixels.size(); ++i) {
    if (g.pixels[i] == 0) {
      b.pixels[i] = 0;
    } else if (g.pixels[i] == 255) {
      b.pixels[i] = 1;
    } else {
      throw InputError(path + ": not a binary mask (pixel value " +
                       std::to_string(int(g.pixels[i])) + ")");
    }
  }
  return b;
}

void write_binary_pgm(const BinaryImage& img, const std::string& path) {
  GrayImage g;
  g.width = img.width;
  g.height = img.height;
  g.pixels.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) g.pixels[i] = img.pixels[i] ? 255 : 0;
  write_pgm(g, path);
}

}  // namespace dpmrf
