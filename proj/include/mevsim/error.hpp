#pragma once

#include <stdexcept>
#include <string>

namespace mevsim {

// Runtime failure inside a simulation or solver stage.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration; the CLI maps it to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mevsim
