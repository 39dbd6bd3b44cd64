#pragma once

#include <cstdint>

#include "dpmrf/graph/image.hpp"

namespace dpmrf {

struct PhantomSpec {
  std::uint32_t width = 128;
  std::uint32_t height = 128;
  double pore_fraction = 0.25;  // in [0, 1)
  double sp_rate = 0.0;         // salt-and-pepper pixel fraction, [0, 1]
  double gauss_sigma = 0.0;     // additive noise std, intensity units
  bool ringing = false;
  std::uint64_t seed = 0;
};

/// Throws InputError on out-of-range fields.
void validate_spec(const PhantomSpec& spec);

struct Phantom {
  BinaryImage truth;  // 1 = pore
  GrayImage clean;    // pore 50, solid 200
};

/// Union of seeded random discs. Disc radii adapt to the remaining pore
/// deficit (large discs first, smaller ones to land the target), keeping
/// the measured pore fraction within 0.05 of the request.
Phantom gen_phantom(const PhantomSpec& spec);

/// Corruption pipeline, per pixel: salt-and-pepper replacement (0 or 255
/// with probability sp_rate/2 each), then additive Gaussian noise, then a
/// seeded radial sinusoid of amplitude 15 if ringing is on, then clamping
/// to [0,255]. All randomness is a pure function of (seed, pixel index).
GrayImage corrupt(const GrayImage& clean, const PhantomSpec& spec);

}  // namespace dpmrf
