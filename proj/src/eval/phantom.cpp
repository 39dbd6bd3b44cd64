#include "dpmrf/eval/phantom.hpp"

#include <algorithm>
#include <cmath>

#include "dpmrf/error.hpp"

namespace dpmrf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRingAmplitude = 15.0;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t next_u64(std::uint64_t& state) {
  return mix64(state += 0x9E3779B97F4A7C15ull);
}

double next_unit(std::uint64_t& state) {
  return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

// Counter-based: draw k for pixel i, independent of evaluation order.
std::uint64_t pixel_draw(std::uint64_t seed, std::uint64_t pixel, std::uint64_t k) {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (pixel * 8 + k + 1));
}

double pixel_unit(std::uint64_t seed, std::uint64_t pixel, std::uint64_t k) {
  return static_cast<double>(pixel_draw(seed, pixel, k) >> 11) * 0x1.0p-53;
}

// (0, 1] for the Box-Muller logarithm.
double pixel_unit_pos(std::uint64_t seed, std::uint64_t pixel, std::uint64_t k) {
  return static_cast<double>((pixel_draw(seed, pixel, k) >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

void validate_spec(const PhantomSpec& spec) {
  if (spec.width == 0 || spec.height == 0) throw InputError("phantom: zero dimension");
  if (!(spec.pore_fraction >= 0.0 && spec.pore_fraction < 1.0))
    throw InputError("phantom: pore fraction must be in [0, 1)");
  if (!(spec.sp_rate >= 0.0 && spec.sp_rate <= 1.0))
    throw InputError("phantom: salt-and-pepper rate must be in [0, 1]");
  if (!(spec.gauss_sigma >= 0.0)) throw InputError("phantom: gauss sigma must be >= 0");
}

Phantom gen_phantom(const PhantomSpec& spec) {
  validate_spec(spec);
  const std::uint32_t w = spec.width;
  const std::uint32_t h = spec.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  Phantom ph;
  ph.truth.width = w;
  ph.truth.height = h;
  ph.truth.pixels.assign(n, 0);

  const auto target = static_cast<std::size_t>(spec.pore_fraction * static_cast<double>(n));
  const double r_max = std::max(2.0, std::min(w, h) / 3.0);
  std::uint64_t state = spec.seed;
  std::size_t pore = 0;

  for (int guard = 0; pore < target && guard < 100000; ++guard) {
    // Radius sized to the remaining deficit, so the union lands within the
    // +-0.05 tolerance instead of wandering past it.
    const double deficit = static_cast<double>(target - pore);
    const double r = std::clamp(std::sqrt(deficit / kPi), 2.0, r_max);
    const double cx = next_unit(state) * w;
    const double cy = next_unit(state) * h;

    const auto y0 = static_cast<std::int64_t>(std::floor(cy - r));
    const auto y1 = static_cast<std::int64_t>(std::ceil(cy + r));
    const auto x0 = static_cast<std::int64_t>(std::floor(cx - r));
    const auto x1 = static_cast<std::int64_t>(std::ceil(cx + r));
    for (std::int64_t y = std::max<std::int64_t>(0, y0); y <= y1 && y < h; ++y) {
      for (std::int64_t x = std::max<std::int64_t>(0, x0); x <= x1 && x < w; ++x) {
        const double dx = (x + 0.5) - cx;
        const double dy = (y + 0.5) - cy;
        if (dx * dx + dy * dy > r * r) continue;
        auto& px = ph.truth.pixels[static_cast<std::size_t>(y) * w + x];
        if (!px) {
          px = 1;
          ++pore;
        }
      }
    }
  }

  ph.clean.width = w;
  ph.clean.height = h;
  ph.clean.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) ph.clean.pixels[i] = ph.truth.pixels[i] ? 50 : 200;
  return ph;
}

GrayImage corrupt(const GrayImage& clean, const PhantomSpec& spec) {
  validate_spec(spec);
  const std::uint32_t w = clean.width;
  const std::uint32_t h = clean.height;
  const std::size_t n = clean.size();

  GrayImage out;
  out.width = w;
  out.height = h;
  out.pixels.resize(n);

  const double half_sp = spec.sp_rate / 2.0;
  const double wavelength = std::max(1.0, std::min(w, h) / 4.0);
  std::uint64_t phase_state = spec.seed ^ 0xA5A5A5A5A5A5A5A5ull;
  const double phase = 2.0 * kPi * next_unit(phase_state);
  const double cx = w / 2.0;
  const double cy = h / 2.0;

  for (std::size_t i = 0; i < n; ++i) {
    double val = clean.pixels[i];

    if (spec.sp_rate > 0.0) {
      const double u = pixel_unit(spec.seed, i, 0);
      if (u < half_sp) {
        val = 0.0;
      } else if (u < spec.sp_rate) {
        val = 255.0;
      }
    }

    if (spec.gauss_sigma > 0.0) {
      const double u1 = pixel_unit_pos(spec.seed, i, 1);
      const double u2 = pixel_unit(spec.seed, i, 2);
      val += spec.gauss_sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    if (spec.ringing) {
      const double dx = (i % w + 0.5) - cx;
      const double dy = (i / w + 0.5) - cy;
      const double radius = std::sqrt(dx * dx + dy * dy);
      val += kRingAmplitude * std::sin(2.0 * kPi * radius / wavelength + phase);
    }

    val = std::clamp(val, 0.0, 255.0);
    out.pixels[i] = static_cast<std::uint8_t>(std::lround(val));
  }
  return out;
}

}  // namespace dpmrf
