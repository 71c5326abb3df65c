#pragma once

#include <stdexcept>
#include <string>

namespace hosf {

// Invalid user input: malformed config file, bad CLI argument, unwritable path.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failure: NaN detected mid-run, fixed-point divergence.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hosf
