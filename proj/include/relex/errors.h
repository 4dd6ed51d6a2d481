#pragma once

#include <stdexcept>
#include <string>

namespace relex {

// Invalid configuration or usage. The CLI maps this to exit code 1;
// all other exceptions map to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace relex
