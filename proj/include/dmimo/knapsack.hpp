#pragma once

// Overhead-constrained partitioning as a knapsack problem.
//
// The bounded problem (pick N_d groups of each size d, sum N_d*d = K, total
// overhead <= alpha_th) is rewritten in two steps:
//   1. transform_bkp: every (size j, count c) with c*j <= K becomes a basic
//      element "c copies of a j x j group" with profit c * R_j.
//   2. enumerate_candidates: combinations of distinct basic elements whose AP
//      counts add up to exactly K, merged into one candidate per partition.
// Because each candidate is already a full partition, the resulting 0-1
// problem selects exactly one candidate: sort by profit and take the first
// one that fits under the threshold.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmimo/error.hpp"
#include "dmimo/overhead.hpp"
#include "dmimo/partition.hpp"

namespace dmimo {

inline constexpr int default_oracle_limit = 12;

struct basic_element {
  int size = 0;     // order j of the MIMO block
  int count = 0;    // copies of the block
  int aps = 0;      // count * size
  double profit = 0.0;  // count * R_j
};

struct knapsack_candidate {
  partition composition;
  double profit = 0.0;  // data-share-weighted effective sum-rate
  double weight = 0.0;  // total overhead fraction
  int index = 0;        // reverse-lexicographic ordinal among candidates
};

struct constrained_solution {
  std::optional<knapsack_candidate> chosen;
  double alpha_threshold = 0.0;
  int feasible_count = 0;
};

// Loop order: size ascending, count ascending within a size.
inline std::vector<basic_element> transform_bkp(int k, const rate_map& rates) {
  if (k < 1) throw invalid_input("transform_bkp: k must be >= 1");
  std::vector<basic_element> out;
  for (int j = 1; j <= k; ++j) {
    const double rate = lookup_rate(rates, j);
    for (int c = 1; c <= k / j; ++c) out.push_back({j, c, c * j, c * rate});
  }
  return out;
}

namespace detail {

inline void collect_combinations(const std::vector<basic_element>& elements, std::size_t start,
                                 int remaining, std::vector<int>& sizes,
                                 std::set<std::vector<int>, std::greater<>>& seen) {
  if (remaining == 0) {
    auto key = sizes;
    std::sort(key.begin(), key.end(), std::greater<>());
    seen.insert(std::move(key));
    return;
  }
  for (std::size_t i = start; i < elements.size(); ++i) {
    const auto& e = elements[i];
    // Sizes ascend with index, so once one element overshoots all later
    // elements of larger size do too; skip ahead rather than stop.
    if (e.aps > remaining) continue;
    sizes.insert(sizes.end(), static_cast<std::size_t>(e.count), e.size);
    collect_combinations(elements, i + 1, remaining - e.aps, sizes, seen);
    sizes.resize(sizes.size() - static_cast<std::size_t>(e.count));
  }
}

}  // namespace detail

inline std::vector<knapsack_candidate> enumerate_candidates(const std::vector<basic_element>& elements,
                                                            int k, const overhead_params& oh) {
  oh.validate();
  if (k < 1) throw invalid_input("enumerate_candidates: k must be >= 1");
  std::map<std::pair<int, int>, const basic_element*> by_block;
  for (const auto& e : elements) {
    if (e.aps != e.size * e.count) throw invalid_input("enumerate_candidates: malformed element");
    by_block[{e.size, e.count}] = &e;
  }

  // Distinct element indices may reach the same multiset (e.g. 1x(1x1) +
  // 2x(1x1) and 3x(1x1)); the set keeps one copy, ordered reverse-lex.
  std::set<std::vector<int>, std::greater<>> seen;
  std::vector<int> scratch;
  detail::collect_combinations(elements, 0, k, scratch, seen);

  std::vector<knapsack_candidate> out;
  out.reserve(seen.size());
  for (const auto& sizes : seen) {
    knapsack_candidate cand;
    cand.composition = partition::from_sizes(sizes);
    cand.index = static_cast<int>(out.size());
    const int d = cand.composition.d_total();
    for (const auto& g : cand.composition.groups()) {
      auto it = by_block.find({g.size, g.count});
      if (it == by_block.end())
        throw invalid_input("enumerate_candidates: no basic element for " + std::to_string(g.count) +
                            "*(" + std::to_string(g.size) + "x" + std::to_string(g.size) + ")");
      const double data_share = std::max(0.0, raw_data_share(oh, g.size, d));
      cand.profit += data_share * it->second->profit;
      cand.weight += g.count * group_overhead_share(oh, g.size);
    }
    out.push_back(std::move(cand));
  }
  return out;
}

// Greedy-split ranking: profit desc, then weight asc, then fewer groups, then
// reverse-lex (candidate index).
inline bool ranks_before(const knapsack_candidate& a, const knapsack_candidate& b) {
  if (a.profit != b.profit) return a.profit > b.profit;
  if (a.weight != b.weight) return a.weight < b.weight;
  if (a.composition.d_total() != b.composition.d_total())
    return a.composition.d_total() < b.composition.d_total();
  return a.index < b.index;
}

inline void check_threshold(double alpha_th) {
  if (!(alpha_th >= 0.0 && alpha_th <= 1.0))
    throw invalid_input("alpha_th must lie in [0, 1], got " + std::to_string(alpha_th));
}

inline constrained_solution solve_constrained(std::vector<knapsack_candidate> candidates,
                                              double alpha_th) {
  if (candidates.empty()) throw invalid_input("solve_constrained: no candidates");
  check_threshold(alpha_th);
  std::sort(candidates.begin(), candidates.end(), ranks_before);
  constrained_solution sol;
  sol.alpha_threshold = alpha_th;
  for (const auto& c : candidates) {
    if (c.weight > alpha_th) continue;
    ++sol.feasible_count;
    if (!sol.chosen) sol.chosen = c;
  }
  return sol;
}

// transform -> enumerate -> solve in one call.
inline constrained_solution solve_constrained(int k, const rate_map& rates, const overhead_params& oh,
                                              double alpha_th) {
  return solve_constrained(enumerate_candidates(transform_bkp(k, rates), k, oh), alpha_th);
}

// Independent check: score every partition directly and keep the best
// feasible one by linear scan.
inline constrained_solution oracle_bruteforce(int k, const rate_map& rates, const overhead_params& oh,
                                              double alpha_th, int limit = default_oracle_limit) {
  if (k > limit)
    throw size_limit("oracle_bruteforce: k=" + std::to_string(k) + " exceeds limit " +
                     std::to_string(limit));
  check_threshold(alpha_th);
  constrained_solution sol;
  sol.alpha_threshold = alpha_th;
  int index = 0;
  for (const auto& p : enumerate_partitions(k, limit)) {
    const auto s = score_partition(p, rates, oh);
    knapsack_candidate c{s.part, s.effective_rate, s.total_overhead, index++};
    if (c.weight > alpha_th) continue;
    ++sol.feasible_count;
    if (!sol.chosen || ranks_before(c, *sol.chosen)) sol.chosen = std::move(c);
  }
  return sol;
}

}  // namespace dmimo
