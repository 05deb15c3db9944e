#pragma once

#include <stdexcept>
#include <string>

namespace yaglom {

// Error categories map one-to-one onto the CLI exit codes:
// config_error -> 1, io_error -> 2, numerical_error -> 3.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace yaglom
