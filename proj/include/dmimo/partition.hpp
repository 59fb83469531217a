#pragma once

// Orthogonal partitions of a K x K network into jointly-beamformed groups,
// their effective sum-rates, and the exhaustive unconstrained optimum.

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dmimo/error.hpp"
#include "dmimo/overhead.hpp"

namespace dmimo {

inline constexpr int default_partition_limit = 30;

// Mean sum-rate of one group, keyed by group size.
using rate_map = std::map<int, double>;

struct group_block {
  int size = 0;
  int count = 0;
  friend bool operator==(const group_block&, const group_block&) = default;
};

// A multiset of group sizes, stored as (size, count) with sizes strictly
// decreasing.
class partition {
 public:
  partition() = default;

  // Sizes in any order; zero or negative sizes are rejected.
  static partition from_sizes(std::vector<int> sizes) {
    if (sizes.empty()) throw invalid_input("partition: no groups");
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    partition p;
    for (int s : sizes) {
      if (s < 1) throw invalid_input("partition: group sizes must be >= 1");
      if (!p.groups_.empty() && p.groups_.back().size == s)
        ++p.groups_.back().count;
      else
        p.groups_.push_back({s, 1});
      p.k_total_ += s;
      ++p.d_total_;
    }
    return p;
  }

  static partition from_blocks(std::vector<group_block> blocks) {
    std::vector<int> sizes;
    for (const auto& b : blocks) {
      if (b.count < 1) throw invalid_input("partition: group counts must be >= 1");
      sizes.insert(sizes.end(), static_cast<std::size_t>(b.count), b.size);
    }
    return from_sizes(std::move(sizes));
  }

  const std::vector<group_block>& groups() const noexcept { return groups_; }
  int k_total() const noexcept { return k_total_; }
  int d_total() const noexcept { return d_total_; }

  // Expanded, descending.
  std::vector<int> sizes() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(d_total_));
    for (const auto& g : groups_) out.insert(out.end(), static_cast<std::size_t>(g.count), g.size);
    return out;
  }

  // "3+1+1"
  std::string sum_label() const {
    std::string out;
    for (int s : sizes()) {
      if (!out.empty()) out += '+';
      out += std::to_string(s);
    }
    return out;
  }

  // "3x3+2*(1x1)"
  std::string label() const {
    std::string out;
    for (const auto& g : groups_) {
      if (!out.empty()) out += '+';
      const std::string block = std::to_string(g.size) + "x" + std::to_string(g.size);
      out += g.count == 1 ? block : std::to_string(g.count) + "*(" + block + ")";
    }
    return out;
  }

  friend bool operator==(const partition& a, const partition& b) { return a.groups_ == b.groups_; }

  // Reverse-lexicographic rank: {k} first, k singletons last.
  friend bool precedes(const partition& a, const partition& b) {
    const auto sa = a.sizes();
    const auto sb = b.sizes();
    return std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end());
  }

 private:
  std::vector<group_block> groups_;
  int k_total_ = 0;
  int d_total_ = 0;
};

struct partition_score {
  partition part;
  double effective_rate = 0.0;
  double total_overhead = 0.0;
  rate_map per_group_rates;
};

// All partitions of k in reverse-lexicographic order.
inline std::vector<partition> enumerate_partitions(int k, int limit = default_partition_limit) {
  if (k < 1) throw invalid_input("enumerate_partitions: k must be >= 1");
  if (k > limit)
    throw size_limit("enumerate_partitions: k=" + std::to_string(k) + " exceeds limit " +
                     std::to_string(limit));
  std::vector<partition> out;
  std::vector<int> parts{k};
  for (;;) {
    out.push_back(partition::from_sizes(parts));
    // Rightmost part that can still be split.
    auto it = std::find_if(parts.rbegin(), parts.rend(), [](int v) { return v > 1; });
    if (it == parts.rend()) break;
    const auto idx = static_cast<std::size_t>(std::distance(it, parts.rend()) - 1);
    int remaining = std::accumulate(parts.begin() + static_cast<std::ptrdiff_t>(idx), parts.end(), 0);
    const int part = parts[idx] - 1;
    parts.resize(idx);
    while (remaining >= part) {
      parts.push_back(part);
      remaining -= part;
    }
    if (remaining > 0) parts.push_back(remaining);
  }
  return out;
}

inline double lookup_rate(const rate_map& rates, int size) {
  auto it = rates.find(size);
  if (it == rates.end())
    throw incomplete_rates("no rate supplied for group size " + std::to_string(size));
  if (!(it->second >= 0.0)) throw invalid_input("rates must be non-negative");
  return it->second;
}

// Sum over groups in descending size order of clipped_data_share * (count * rate).
inline partition_score score_partition(const partition& p, const rate_map& rates,
                                       const overhead_params& oh) {
  oh.validate();
  partition_score s;
  s.part = p;
  for (const auto& g : p.groups()) {
    const double rate = lookup_rate(rates, g.size);
    s.per_group_rates[g.size] = rate;
    const double data = make_frame_split(oh, g.size, p.d_total()).data_fraction;
    s.effective_rate += data * (g.count * rate);
    s.total_overhead += g.count * group_overhead_share(oh, g.size);
  }
  return s;
}

struct optimal_partition_result {
  partition_score best;
  std::vector<partition_score> ranked;  // effective_rate descending
};

// Exhaustive search. Ties: fewer groups first, then reverse-lexicographic.
inline optimal_partition_result optimal_partition(int k, const rate_map& rates,
                                                  const overhead_params& oh,
                                                  int limit = default_partition_limit) {
  optimal_partition_result res;
  for (auto& p : enumerate_partitions(k, limit)) res.ranked.push_back(score_partition(p, rates, oh));
  std::stable_sort(res.ranked.begin(), res.ranked.end(),
                   [](const partition_score& a, const partition_score& b) {
                     if (a.effective_rate != b.effective_rate) return a.effective_rate > b.effective_rate;
                     return a.part.d_total() < b.part.d_total();
                   });
  res.best = res.ranked.front();
  return res;
}

}  // namespace dmimo
