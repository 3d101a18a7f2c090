#ifndef NLSHIFT_ERRORS_HPP
#define NLSHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlshift {

// Bad inputs: invalid parameters, malformed config, preconditions violated.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime: instability, lost fronts, iteration budgets.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlshift

#endif
