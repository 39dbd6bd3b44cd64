#pragma once

#include <stdexcept>
#include <string>

namespace dpmrf {

/// Problems caused by user-supplied input: missing or malformed files,
/// dimension mismatches, invalid label maps, bad flag values. The CLI maps
/// these to exit code 2; anything else escaping is an internal failure (1).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpmrf
