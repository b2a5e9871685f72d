#pragma once

#include <stdexcept>
#include <string>

namespace sparc {

// Bad user-facing configuration (config file, CLI arguments, malformed
// dictionary files). CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical guard tripped (AMP divergence, quadrature non-convergence,
// brute-force search space too large). CLI maps this to exit code 3.
struct NumericGuard : std::runtime_error {
  explicit NumericGuard(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sparc
