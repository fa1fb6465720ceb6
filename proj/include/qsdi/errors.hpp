#pragma once

#include <stdexcept>
#include <string>

namespace qsdi {

// Domain failures that callers are expected to handle; the CLI maps these
// to exit code 1 with a machine-readable error object.

struct NotBellDiagonal : std::runtime_error {
  explicit NotBellDiagonal(const std::string& what) : std::runtime_error(what) {}
};

struct NeverSecure : std::runtime_error {
  explicit NeverSecure(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroSuccessProbability : std::runtime_error {
  explicit ZeroSuccessProbability(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace qsdi
