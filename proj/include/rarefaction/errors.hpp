// Error types shared across the library. The CLI maps them onto process exit
// codes: ConfigError -> 1, NumericalError -> 2, IoError -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace rarefaction {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rarefaction
