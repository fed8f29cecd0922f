#pragma once

#include <stdexcept>

namespace sevrank {

// Error taxonomy mirrored by the CLI exit codes: config=1, data=2, io=3.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sevrank
