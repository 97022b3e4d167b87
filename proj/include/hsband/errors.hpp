// Error types shared across the toolkit. IoError covers missing or malformed
// input files and payloads; ConfigError covers invalid parameters and numeric
// domain violations. The CLI maps them to exit codes 2 and 3.
#pragma once

#include <stdexcept>
#include <string>

namespace hsband {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hsband
