#pragma once

// Overhead scaling law L(k) = k^r and the frame arithmetic built on it.
//
// A frame of T symbols is shared by D orthogonal groups. A group of size k
// spends k^r / T of the whole frame on overhead and gets 1/D - k^r / T of it
// for data; the data share is clipped at zero for starved groups.

#include <algorithm>
#include <cmath>
#include <string>

#include "dmimo/error.hpp"

namespace dmimo {

struct overhead_params {
  double r = 2.0;  // scaling exponent
  int t = 100;     // frame length in symbols

  void validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) throw invalid_input("overhead: exponent r must be > 0");
    if (t < 1) throw invalid_input("overhead: frame length T must be >= 1");
  }
};

struct frame_split {
  double data_fraction = 0.0;
  double overhead_fraction = 0.0;
  int group_size = 0;
  int num_groups = 0;
};

inline double scaling(const overhead_params& oh, int k) {
  oh.validate();
  if (k < 1) throw invalid_input("overhead: group size must be >= 1, got " + std::to_string(k));
  return std::pow(static_cast<double>(k), oh.r);
}

// Unclipped share of the frame that one group of size k spends on overhead.
inline double group_overhead_share(const overhead_params& oh, int k) {
  return scaling(oh, k) / static_cast<double>(oh.t);
}

// Data share of one group of size k among num_groups; may be negative.
inline double raw_data_share(const overhead_params& oh, int k, int num_groups) {
  if (num_groups < 1) throw invalid_input("overhead: number of groups must be >= 1");
  return 1.0 / static_cast<double>(num_groups) - group_overhead_share(oh, k);
}

inline double full_network_alpha(const overhead_params& oh, int k) {
  return std::min(group_overhead_share(oh, k), 1.0);
}

inline frame_split make_frame_split(const overhead_params& oh, int group_size, int num_groups) {
  frame_split fs;
  fs.group_size = group_size;
  fs.num_groups = num_groups;
  fs.data_fraction = std::max(0.0, raw_data_share(oh, group_size, num_groups));
  fs.overhead_fraction = std::min(group_overhead_share(oh, group_size), 1.0);
  return fs;
}

// (1 - alpha) * rate for an unpartitioned network of size k.
inline double full_network_effective_rate(const overhead_params& oh, int k, double rate) {
  return (1.0 - full_network_alpha(oh, k)) * rate;
}

}  // namespace dmimo
