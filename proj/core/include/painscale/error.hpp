#pragma once

#include <stdexcept>
#include <string>

namespace painscale {

/// Error type thrown across the library for contract violations and bad input.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace painscale
