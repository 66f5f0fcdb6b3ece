#pragma once

#include <stdexcept>

namespace rmk {

// Error taxonomy shared by the library and the CLI exit-code mapping:
//   invalid_argument_error - caller mistakes (bad dimensions, bad config)
//   data_error             - unusable input files or degenerate datasets
//   numeric_error          - solver failures, divergence, certificate misses
//   capacity_error         - dictionary budget exhausted
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_argument_error : error {
  using error::error;
};

struct data_error : error {
  using error::error;
};

struct numeric_error : error {
  using error::error;
};

struct capacity_error : error {
  using error::error;
};

}  // namespace rmk
