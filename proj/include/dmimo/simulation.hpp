#pragma once

// Monte Carlo rate tables and the three experiment sweeps (coherence time,
// network size, maximum allowed overhead).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dmimo/channel.hpp"
#include "dmimo/error.hpp"
#include "dmimo/knapsack.hpp"
#include "dmimo/overhead.hpp"
#include "dmimo/partition.hpp"
#include "dmimo/rng.hpp"

namespace dmimo {

// Unit noise power and unit mean channel gain, so P = 10^(SNR/10).
inline double power_from_snr_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

inline constexpr int max_redraws = 64;

struct sim_config {
  std::vector<int> k_values{2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<double> snr_db{25.0};
  std::vector<int> t_values{20, 50, 100, 200, 500, 1000, 2000};
  double r = 2.0;
  int trials = 2000;
  std::uint64_t base_seed = 1;
  std::vector<double> alpha_th_values{0.0,  0.05, 0.1,  0.15, 0.2,  0.25, 0.3,
                                      0.35, 0.4,  0.45, 0.5,  0.55, 0.6,  0.65,
                                      0.7,  0.75, 0.8,  0.85, 0.9,  0.95, 1.0};
  // Normalization reference; each sweep fills in its own default when unset.
  std::optional<int> ref_k;
  std::optional<double> ref_snr_db;
  std::optional<int> ref_t;  // sweep-cct only; defaults to the largest T
  unsigned threads = 0;      // 0 = hardware concurrency

  int k_max() const { return k_values.empty() ? 0 : *std::max_element(k_values.begin(), k_values.end()); }

  void validate() const {
    if (trials < 1) throw config_error("trials must be >= 1");
    if (k_values.empty()) throw config_error("k_values is empty");
    if (snr_db.empty()) throw config_error("snr_db is empty");
    if (t_values.empty()) throw config_error("t_values is empty");
    if (alpha_th_values.empty()) throw config_error("alpha_th_values is empty");
    if (!(r > 0.0) || !std::isfinite(r)) throw config_error("r must be > 0");
    for (int k : k_values) {
      if (k < 1) throw config_error("k values must be >= 1");
      if (k > default_partition_limit) throw size_limit("k=" + std::to_string(k) + " exceeds limit 30");
    }
    for (double s : snr_db)
      if (!std::isfinite(s)) throw config_error("snr_db values must be finite");
    for (int t : t_values)
      if (t < 1) throw config_error("t values must be >= 1");
    for (double a : alpha_th_values)
      if (!(a >= 0.0 && a <= 1.0)) throw config_error("alpha_th values must lie in [0, 1]");
  }
};

// Mean ZFBF sum-rate per (snr point, group size).
class rate_table {
 public:
  rate_table() = default;
  rate_table(std::vector<double> snr_db, int k_max, int trials)
      : snr_db_(std::move(snr_db)),
        k_max_(k_max),
        trials_(trials),
        mean_(snr_db_.size(), std::vector<double>(static_cast<std::size_t>(k_max))),
        stderr_(mean_) {}

  const std::vector<double>& snr_db() const noexcept { return snr_db_; }
  int k_max() const noexcept { return k_max_; }
  int trials() const noexcept { return trials_; }
  std::size_t redraws() const noexcept { return redraws_; }

  double mean(int size, std::size_t snr_idx) const { return mean_.at(snr_idx).at(slot(size)); }
  double standard_error(int size, std::size_t snr_idx) const { return stderr_.at(snr_idx).at(slot(size)); }

  std::size_t snr_index(double db) const {
    for (std::size_t i = 0; i < snr_db_.size(); ++i)
      if (std::abs(snr_db_[i] - db) <= 1e-9) return i;
    throw config_error("snr " + std::to_string(db) + " dB is not in the rate table");
  }

  rate_map rates_at(std::size_t snr_idx) const {
    rate_map out;
    for (int j = 1; j <= k_max_; ++j) out[j] = mean(j, snr_idx);
    return out;
  }
  rate_map stderrs_at(std::size_t snr_idx) const {
    rate_map out;
    for (int j = 1; j <= k_max_; ++j) out[j] = standard_error(j, snr_idx);
    return out;
  }

  void set(int size, std::size_t snr_idx, double mean, double se) {
    mean_.at(snr_idx).at(slot(size)) = mean;
    stderr_.at(snr_idx).at(slot(size)) = se;
  }
  void add_redraws(std::size_t n) { redraws_ += n; }

 private:
  std::size_t slot(int size) const {
    if (size < 1 || size > k_max_) throw incomplete_rates("rate table has no entry for size " + std::to_string(size));
    return static_cast<std::size_t>(size - 1);
  }

  std::vector<double> snr_db_;
  int k_max_ = 0;
  int trials_ = 0;
  std::vector<std::vector<double>> mean_;
  std::vector<std::vector<double>> stderr_;
  std::size_t redraws_ = 0;
};

struct trial_sample {
  double sum_rate = 0.0;
  int redraws = 0;
};

// One Monte Carlo trial. The stream is keyed by (size, snr index, trial,
// attempt) so results do not depend on evaluation order.
inline trial_sample sample_trial(std::uint64_t base_seed, int size, std::size_t snr_idx, int trial,
                                 double power) {
  for (int attempt = 0; attempt < max_redraws; ++attempt) {
    const auto seed = stream_seed(base_seed, {static_cast<std::uint64_t>(size), snr_idx,
                                              static_cast<std::uint64_t>(trial),
                                              static_cast<std::uint64_t>(attempt)});
    try {
      return {zfbf_sum_rate(draw_channel(size, seed), power).sum_rate, attempt};
    } catch (const ill_conditioned_channel&) {
    }
  }
  throw ill_conditioned_channel("too many ill-conditioned redraws for size " + std::to_string(size));
}

inline rate_table build_rate_table(const sim_config& cfg) {
  cfg.validate();
  const int k_max = cfg.k_max();
  rate_table table(cfg.snr_db, k_max, cfg.trials);

  struct cell {
    std::size_t snr_idx;
    int size;
    double mean = 0.0, se = 0.0;
    std::size_t redraws = 0;
  };
  std::vector<cell> cells;
  for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
    for (int j = 1; j <= k_max; ++j) cells.push_back({s, j});

  // Each cell is reduced serially in trial order (Welford), so the result is
  // identical for any thread count.
  auto run_cell = [&](cell& c) {
    const double power = power_from_snr_db(cfg.snr_db[c.snr_idx]);
    double mean = 0.0, m2 = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const auto smp = sample_trial(cfg.base_seed, c.size, c.snr_idx, t, power);
      c.redraws += static_cast<std::size_t>(smp.redraws);
      const double delta = smp.sum_rate - mean;
      mean += delta / (t + 1);
      m2 += delta * (smp.sum_rate - mean);
    }
    c.mean = mean;
    c.se = cfg.trials > 1 ? std::sqrt(m2 / (cfg.trials - 1) / cfg.trials) : 0.0;
  };

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cells.size()));
  if (workers <= 1) {
    for (auto& c : cells) run_cell(c);
  } else {
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < cells.size(); i += workers) run_cell(cells[i]);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
    }
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  }

  for (const auto& c : cells) {
    table.set(c.size, c.snr_idx, c.mean, c.se);
    table.add_redraws(c.redraws);
  }
  return table;
}

// Standard error of sum_d coeff_d * mean_d, treating sizes as independent
// streams (copies of one size share the same mean, so their coefficients add).
inline double combined_stderr(const partition& p, const rate_map& se, const overhead_params& oh) {
  double var = 0.0;
  for (const auto& g : p.groups()) {
    const double coeff = std::max(0.0, raw_data_share(oh, g.size, p.d_total())) * g.count;
    const double s = lookup_rate(se, g.size);
    var += coeff * coeff * s * s;
  }
  return std::sqrt(var);
}

// Per-realization mode: optimize the partition on each trial's own rates
// and average the optimum. Mean-rate mode (optimal_partition on the table)
// is what the sweeps use.
inline double per_realization_optimum(const sim_config& cfg, int k, std::size_t snr_idx,
                                      const overhead_params& oh) {
  cfg.validate();
  const double power = power_from_snr_db(cfg.snr_db.at(snr_idx));
  double total = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    rate_map rates;
    for (int j = 1; j <= k; ++j) rates[j] = sample_trial(cfg.base_seed, j, snr_idx, t, power).sum_rate;
    total += optimal_partition(k, rates, oh).best.effective_rate;
  }
  return total / cfg.trials;
}

// ---------------------------------------------------------------------------
// Sweeps

struct cct_row {
  int k = 0;
  int t = 0;
  double snr_db = 0.0;
  double full_rate = 0.0;         // (1 - alpha) R_K
  double partitioned_rate = 0.0;  // optimal partition
  double full_stderr = 0.0;
  double partitioned_stderr = 0.0;
  double full_nsr = 0.0;
  double partitioned_nsr = 0.0;
  double partitioned_nsr_stderr = 0.0;
  std::string best_partition;
};

struct aps_row {
  int k = 0;
  double snr_db = 0.0;
  int t = 0;
  double ideal_rate = 0.0;
  double effective_rate = 0.0;
  double ideal_stderr = 0.0;
  double effective_stderr = 0.0;
  double overhead = 0.0;  // total overhead of the chosen partition
  double ideal_nsr = 0.0;
  double effective_nsr = 0.0;
  double effective_nsr_stderr = 0.0;
  std::string best_partition;
};

struct mao_row {
  int k = 0;
  int t = 0;
  double snr_db = 0.0;
  double alpha_th = 0.0;
  double optimal_rate = 0.0;
  double constrained_rate = 0.0;  // 0 when infeasible
  double ratio_pct = 0.0;
  bool feasible = false;
  std::string chosen_partition;   // empty when infeasible
};

namespace detail {

inline void require_in(const std::vector<int>& v, int x, const char* what) {
  if (std::find(v.begin(), v.end(), x) == v.end())
    throw config_error(std::string("reference ") + what + "=" + std::to_string(x) + " is not in the sweep grid");
}

inline std::size_t require_snr(const rate_table& table, double db) {
  try {
    return table.snr_index(db);
  } catch (const config_error&) {
    throw config_error("reference snr_db=" + std::to_string(db) + " is not in the sweep grid");
  }
}

inline void require_table(const sim_config& cfg, const rate_table& table) {
  if (table.k_max() < cfg.k_max()) throw config_error("rate table does not cover every k in the grid");
  for (double s : cfg.snr_db) table.snr_index(s);
}

}  // namespace detail

// Normalized by the optimal-partition effective rate of (ref_k, ref_snr,
// ref_t), defaults (9, 25 dB, largest T).
inline std::vector<cct_row> sweep_cct(const sim_config& cfg, const rate_table& table) {
  cfg.validate();
  detail::require_table(cfg, table);
  const int ref_k = cfg.ref_k.value_or(9);
  const double ref_snr = cfg.ref_snr_db.value_or(25.0);
  const int ref_t = cfg.ref_t.value_or(*std::max_element(cfg.t_values.begin(), cfg.t_values.end()));
  detail::require_in(cfg.k_values, ref_k, "k");
  detail::require_in(cfg.t_values, ref_t, "t");
  const auto ref_idx = detail::require_snr(table, ref_snr);
  const double reference =
      optimal_partition(ref_k, table.rates_at(ref_idx), overhead_params{cfg.r, ref_t}).best.effective_rate;
  if (!(reference > 0.0)) throw config_error("reference effective rate is zero");

  std::vector<cct_row> rows;
  for (int k : cfg.k_values)
    for (double snr : cfg.snr_db) {
      const auto si = table.snr_index(snr);
      const auto rates = table.rates_at(si);
      const auto se = table.stderrs_at(si);
      for (int t : cfg.t_values) {
        const overhead_params oh{cfg.r, t};
        const auto best = optimal_partition(k, rates, oh).best;
        cct_row row;
        row.k = k;
        row.t = t;
        row.snr_db = snr;
        row.full_rate = full_network_effective_rate(oh, k, table.mean(k, si));
        row.full_stderr = (1.0 - full_network_alpha(oh, k)) * table.standard_error(k, si);
        row.partitioned_rate = best.effective_rate;
        row.partitioned_stderr = combined_stderr(best.part, se, oh);
        row.full_nsr = row.full_rate / reference;
        row.partitioned_nsr = row.partitioned_rate / reference;
        row.partitioned_nsr_stderr = row.partitioned_stderr / reference;
        row.best_partition = best.part.label();
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

// Normalized by the zero-overhead rate of (ref_k, ref_snr), defaults (9, 30 dB).
inline std::vector<aps_row> sweep_aps(const sim_config& cfg, const rate_table& table) {
  cfg.validate();
  detail::require_table(cfg, table);
  const int ref_k = cfg.ref_k.value_or(9);
  const double ref_snr = cfg.ref_snr_db.value_or(30.0);
  detail::require_in(cfg.k_values, ref_k, "k");
  const auto ref_idx = detail::require_snr(table, ref_snr);
  const double reference = table.mean(ref_k, ref_idx);
  if (!(reference > 0.0)) throw config_error("reference rate is zero");

  std::vector<aps_row> rows;
  for (int k : cfg.k_values)
    for (double snr : cfg.snr_db) {
      const auto si = table.snr_index(snr);
      const auto rates = table.rates_at(si);
      const auto se = table.stderrs_at(si);
      for (int t : cfg.t_values) {
        const overhead_params oh{cfg.r, t};
        const auto best = optimal_partition(k, rates, oh).best;
        aps_row row;
        row.k = k;
        row.snr_db = snr;
        row.t = t;
        row.ideal_rate = table.mean(k, si);
        row.ideal_stderr = table.standard_error(k, si);
        row.effective_rate = best.effective_rate;
        row.effective_stderr = combined_stderr(best.part, se, oh);
        row.overhead = best.total_overhead;
        row.ideal_nsr = row.ideal_rate / reference;
        row.effective_nsr = row.effective_rate / reference;
        row.effective_nsr_stderr = row.effective_stderr / reference;
        row.best_partition = best.part.label();
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

// Ratio of the constrained optimum to the unconstrained one, in percent.
// An all-zero unconstrained optimum counts as 100% when anything is feasible.
inline std::vector<mao_row> sweep_mao(const sim_config& cfg, const rate_table& table) {
  cfg.validate();
  detail::require_table(cfg, table);
  std::vector<mao_row> rows;
  for (int k : cfg.k_values)
    for (int t : cfg.t_values)
      for (double snr : cfg.snr_db) {
        const auto rates = table.rates_at(table.snr_index(snr));
        const overhead_params oh{cfg.r, t};
        const double optimum = optimal_partition(k, rates, oh).best.effective_rate;
        const auto candidates = enumerate_candidates(transform_bkp(k, rates), k, oh);
        for (double alpha : cfg.alpha_th_values) {
          const auto sol = solve_constrained(candidates, alpha);
          mao_row row;
          row.k = k;
          row.t = t;
          row.snr_db = snr;
          row.alpha_th = alpha;
          row.optimal_rate = optimum;
          row.feasible = sol.chosen.has_value();
          if (sol.chosen) {
            row.constrained_rate = sol.chosen->profit;
            row.chosen_partition = sol.chosen->composition.label();
            row.ratio_pct = (optimum > 0.0 && row.constrained_rate != optimum)
                                ? 100.0 * row.constrained_rate / optimum
                                : 100.0;
          }
          rows.push_back(std::move(row));
        }
      }
  return rows;
}

}  // namespace dmimo
