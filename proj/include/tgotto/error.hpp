#pragma once

#include <stdexcept>
#include <string>

namespace tgotto {

// Invalid physical parameters or malformed input. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Eigensolver/root-finder/integrator failure. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tgotto
