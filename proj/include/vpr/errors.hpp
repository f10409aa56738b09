#pragma once

#include <stdexcept>
#include <string>

namespace vpr {

/// Raised for malformed or inconsistent input data (manifests, ticks, images,
/// serialized artifacts). The CLI maps this to its data-error exit code.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vpr
