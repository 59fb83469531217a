#pragma once

#include <stdexcept>
#include <string>

namespace dmimo {

// Base of every error the library raises.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad sizes, empty inputs, out-of-range fractions.
struct invalid_input : error {
  using error::error;
};

// Channel matrix too close to singular for zero-forcing.
struct ill_conditioned_channel : error {
  using error::error;
};

// A rate lookup was missing a group size.
struct incomplete_rates : error {
  using error::error;
};

// Guards the combinatorial enumerators.
struct size_limit : error {
  using error::error;
};

// Sweep / scenario configuration problems.
struct config_error : error {
  using error::error;
};

}  // namespace dmimo
