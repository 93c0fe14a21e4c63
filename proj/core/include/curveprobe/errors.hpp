#pragma once

#include <stdexcept>
#include <string>

namespace curveprobe {

/// Input that violates a documented invariant or file schema. The CLI maps
/// this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A request that is well formed but exceeds what the toolkit can compute,
/// e.g. a dense eigenproblem above the size bound. Exit code 2.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace curveprobe
