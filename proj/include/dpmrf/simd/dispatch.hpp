#pragma once

namespace dpmrf::simd {

enum class Level { Scalar, Avx2 };

/// Best level supported by the running CPU (and compiled in).
Level detect();

/// Level the kernels will actually use: the override if set, else detect().
Level active();

/// Force a level, e.g. from the CLI or from equivalence tests. Requesting
/// Avx2 on a CPU without it falls back to Scalar.
void set_override(Level level);
void clear_override();

const char* name(Level level);

}  // namespace dpmrf::simd
