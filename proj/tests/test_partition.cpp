#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <random>
#include <set>

#include "dmimo/partition.hpp"
#include "oracles.hpp"

using namespace dmimo;
using Catch::Approx;

namespace {

std::vector<std::vector<int>> size_lists(const std::vector<partition>& parts) {
  std::vector<std::vector<int>> out;
  for (const auto& p : parts) out.push_back(p.sizes());
  return out;
}

rate_map linear_rates(int k, double per_user) {
  rate_map m;
  for (int j = 1; j <= k; ++j) m[j] = per_user * j;
  return m;
}

}  // namespace

TEST_CASE("partition of four in the documented order", "[partition]") {
  const auto parts = enumerate_partitions(4);
  const std::vector<std::vector<int>> expected{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
  REQUIRE(size_lists(parts) == expected);
  REQUIRE(parts[3].label() == "2x2+2*(1x1)");
  REQUIRE(parts[4].sum_label() == "1+1+1+1");
}

TEST_CASE("partition base case and limits", "[partition]") {
  const auto one = enumerate_partitions(1);
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].sizes() == std::vector<int>{1});
  REQUIRE(enumerate_partitions(10).size() == 42);
  REQUIRE_THROWS_AS(enumerate_partitions(31), size_limit);
  REQUIRE_THROWS_AS(enumerate_partitions(0), invalid_input);
  REQUIRE(enumerate_partitions(30).size() == 5604);
}

TEST_CASE("partition counts follow the pentagonal recurrence", "[partition][property]") {
  const auto p = test::partition_counts(20);
  for (int k = 1; k <= 20; ++k) {
    const auto parts = enumerate_partitions(k);
    REQUIRE(parts.size() == p[static_cast<std::size_t>(k)]);
    std::set<std::vector<int>> distinct;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& q = parts[i];
      REQUIRE(q.k_total() == k);
      int d = 0;
      for (std::size_t g = 0; g < q.groups().size(); ++g) {
        REQUIRE(q.groups()[g].count >= 1);
        if (g > 0) REQUIRE(q.groups()[g].size < q.groups()[g - 1].size);
        d += q.groups()[g].count;
      }
      REQUIRE(q.d_total() == d);
      distinct.insert(q.sizes());
      if (i > 0) REQUIRE(precedes(parts[i - 1], q));
    }
    REQUIRE(distinct.size() == parts.size());
    REQUIRE(parts.front().sizes() == std::vector<int>{k});
    REQUIRE(parts.back().sizes() == std::vector<int>(static_cast<std::size_t>(k), 1));
  }
}

TEST_CASE("partition labels", "[partition]") {
  REQUIRE(partition::from_sizes({1, 3, 1}).label() == "3x3+2*(1x1)");
  REQUIRE(partition::from_sizes({4}).label() == "4x4");
  REQUIRE(partition::from_sizes({1, 1, 1, 1}).label() == "4*(1x1)");
  REQUIRE(partition::from_blocks({{2, 2}}).label() == "2*(2x2)");
  REQUIRE_THROWS_AS(partition::from_sizes({2, 0}), invalid_input);
}

TEST_CASE("score_partition arithmetic", "[partition]") {
  const double R = 3.7;
  {
    const auto s = score_partition(partition::from_sizes({1, 1, 1, 1}), {{1, R}}, {2.0, 100});
    REQUIRE(s.effective_rate == Approx(0.96 * R));
    REQUIRE(s.total_overhead == Approx(0.04));
  }
  {
    const auto s = score_partition(partition::from_sizes({2, 2}), {{2, R}}, {2.0, 16});
    REQUIRE(s.effective_rate == Approx(0.5 * R));
    REQUIRE(s.total_overhead == Approx(0.5));
    REQUIRE(s.per_group_rates.at(2) == R);
  }
  {
    const auto s = score_partition(partition::from_sizes({4}), {{4, R}}, {2.0, 1'000'000'000});
    REQUIRE(s.effective_rate == Approx(R).epsilon(1e-7));
  }
  REQUIRE_THROWS_AS(score_partition(partition::from_sizes({3, 1}), {{3, 1.0}}, {2.0, 100}), incomplete_rates);
}

TEST_CASE("optimal_partition hand-evaluated cases", "[partition]") {
  const rate_map rates{{1, 1.0}, {2, 10.0}};
  {
    // (2): (1 - 4/1000)*10 = 9.96 vs (1,1): 2*(0.5 - 0.001)*1 = 0.998.
    const auto res = optimal_partition(2, rates, {2.0, 1000});
    REQUIRE(res.best.part.sizes() == std::vector<int>{2});
    REQUIRE(res.best.effective_rate == Approx(9.96));
    REQUIRE(res.ranked[1].effective_rate == Approx(0.998));
  }
  {
    // (2) is starved; (1,1): 2*(0.5 - 0.25)*1 = 0.5.
    const auto res = optimal_partition(2, rates, {2.0, 4});
    REQUIRE(res.best.part.sizes() == std::vector<int>{1, 1});
    REQUIRE(res.best.effective_rate == Approx(0.5));
  }
  {
    rate_map zero;
    for (int j = 1; j <= 6; ++j) zero[j] = 0.0;
    const auto res = optimal_partition(6, zero, {2.0, 100});
    REQUIRE(res.best.effective_rate == 0.0);
    REQUIRE(res.best.part.sizes() == std::vector<int>{6});
  }
}

TEST_CASE("optimal_partition tie-break prefers fewer groups", "[partition]") {
  // All-zero rates: every partition scores 0, so ranking falls to group count.
  rate_map rates{{1, 0.0}, {2, 0.0}, {3, 0.0}};
  const auto res = optimal_partition(3, rates, {2.0, 100});
  REQUIRE(res.ranked.size() == 3);
  REQUIRE(res.ranked[0].part.d_total() == 1);
  REQUIRE(res.ranked[1].part.d_total() == 2);
  REQUIRE(res.ranked[2].part.d_total() == 3);
}

TEST_CASE("optimal_partition is exhaustive and monotone in T", "[partition][property]") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> per_user(0.5, 8.0);
  for (int iter = 0; iter < 100; ++iter) {
    const int k = 2 + iter % 9;
    rate_map rates;
    for (int j = 1; j <= k; ++j) rates[j] = per_user(gen) * j;
    double previous = -1.0;
    for (int t : {5, 10, 20, 50, 100, 200, 500, 1000, 5000}) {
      const overhead_params oh{2.0, t};
      const auto res = optimal_partition(k, rates, oh);
      for (const auto& p : enumerate_partitions(k))
        REQUIRE(res.best.effective_rate >= score_partition(p, rates, oh).effective_rate);
      for (std::size_t i = 1; i < res.ranked.size(); ++i)
        REQUIRE(res.ranked[i - 1].effective_rate >= res.ranked[i].effective_rate);
      REQUIRE(res.best.effective_rate >= previous);
      previous = res.best.effective_rate;
    }
  }
}

TEST_CASE("large frames favour the full network for superadditive rates", "[partition][property]") {
  for (int k = 2; k <= 12; ++k) {
    auto rates = linear_rates(k, 3.0);
    rates[k] += 0.5;  // strictly superadditive at the top
    const auto res = optimal_partition(k, rates, {2.0, 10'000'000});
    REQUIRE(res.best.part.sizes() == std::vector<int>{k});
  }
}

TEST_CASE("enumerating p(30) stays fast", "[partition]") {
  const auto start = std::chrono::steady_clock::now();
  REQUIRE(enumerate_partitions(30).size() == 5604);
  REQUIRE(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
}
