#pragma once

// Command-line front end. run_cli() is the whole program minus process
// plumbing, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 usage / config / I/O error, 2 infeasible
// constrained instance, 3 numeric or size-limit error.

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmimo/config.hpp"
#include "dmimo/error.hpp"
#include "dmimo/knapsack.hpp"
#include "dmimo/partition.hpp"
#include "dmimo/report.hpp"
#include "dmimo/simulation.hpp"

namespace dmimo::cli {

enum exit_code : int { ok = 0, usage = 1, infeasible = 2, numeric = 3 };

struct options {
  std::optional<std::string> k, snr_db, t, alpha_th;
  std::optional<double> r;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_path;
  std::optional<std::string> output_path;
  std::string format = "csv";
};

// Per-command defaults before the config file and flags are layered on.
inline sim_config defaults_for(const std::string& command) {
  sim_config cfg;
  if (command == "sweep-cct") {
    cfg.k_values = {3, 5, 7, 9};
    cfg.snr_db = {25.0};
  } else if (command == "sweep-aps") {
    cfg.snr_db = {20.0, 25.0, 30.0};
    cfg.t_values = {100, 1000};
  } else if (command == "sweep-mao") {
    cfg.snr_db = {25.0};
    cfg.t_values = {100};
  } else if (command == "rate-table") {
    cfg.k_values = {9};
    cfg.snr_db = {25.0};
  } else {
    // solve / solve-constrained take single values and have no default k, t.
    cfg.k_values.clear();
    cfg.t_values.clear();
    cfg.snr_db = {25.0};
    cfg.alpha_th_values.clear();
  }
  return cfg;
}

// config file first, flags override.
inline sim_config resolve_config(const std::string& command, const options& opt) {
  auto cfg = defaults_for(command);
  if (opt.config_path) read_config_file(*opt.config_path, cfg);
  if (opt.k) apply_config_value(cfg, "k", *opt.k);
  if (opt.snr_db) apply_config_value(cfg, "snr_db", *opt.snr_db);
  if (opt.t) apply_config_value(cfg, "t", *opt.t);
  if (opt.alpha_th) apply_config_value(cfg, "alpha_th", *opt.alpha_th);
  if (opt.r) cfg.r = *opt.r;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.seed) cfg.base_seed = *opt.seed;
  return cfg;
}

template <typename T>
T single(const std::vector<T>& values, const char* name) {
  if (values.empty()) throw config_error(std::string("missing required parameter --") + name);
  if (values.size() != 1) throw config_error(std::string("--") + name + " takes a single value here");
  return values.front();
}

struct command_result {
  int code = ok;
  std::string body;     // written to --output or stdout
  std::string message;  // written to stderr
};

inline command_result cmd_partitions(const sim_config& cfg, const std::string& format) {
  const int k = single(cfg.k_values, "k");
  const auto parts = enumerate_partitions(k);
  std::ostringstream os;
  if (format == "json") {
    auto list = nlohmann::json::array();
    for (const auto& p : parts) list.push_back({{"sizes", p.sizes()}, {"label", p.label()}});
    os << nlohmann::json{{"k", k}, {"count", parts.size()}, {"partitions", list}}.dump(2) << '\n';
  } else {
    os << parts.size() << " partitions\n";
    for (const auto& p : parts) os << p.sum_label() << '\n';
  }
  return {ok, os.str(), {}};
}

inline rate_table solve_rate_table(const sim_config& cfg, int k) {
  auto table_cfg = cfg;
  table_cfg.k_values = {k};
  table_cfg.t_values = {1};
  table_cfg.alpha_th_values = {0.0};
  return build_rate_table(table_cfg);
}

inline command_result cmd_solve(const sim_config& cfg, const std::string& format, bool constrained) {
  const int k = single(cfg.k_values, "k");
  const int t = single(cfg.t_values, "t");
  const double snr = single(cfg.snr_db, "snr-db");
  std::optional<double> alpha;
  if (constrained) alpha = single(cfg.alpha_th_values, "alpha-th");
  auto check = cfg;
  check.k_values = {k};
  check.t_values = {t};
  if (!alpha) check.alpha_th_values = {1.0};
  check.validate();

  const auto table = solve_rate_table(cfg, k);
  const auto rates = table.rates_at(0);
  const overhead_params oh{cfg.r, t};

  nlohmann::json doc{{"k", k}, {"t", t}, {"snr_db", snr}, {"r", cfg.r}, {"trials", cfg.trials},
                     {"seed", cfg.base_seed}};
  std::string chosen;
  double rate = 0.0, overhead = 0.0;
  int feasible_count = 0;
  bool feasible = true;
  if (!constrained) {
    const auto best = optimal_partition(k, rates, oh).best;
    chosen = best.part.label();
    rate = best.effective_rate;
    overhead = best.total_overhead;
  } else {
    const auto sol = solve_constrained(k, rates, oh, *alpha);
    feasible_count = sol.feasible_count;
    feasible = sol.chosen.has_value();
    if (feasible) {
      chosen = sol.chosen->composition.label();
      rate = sol.chosen->profit;
      overhead = sol.chosen->weight;
    }
    doc["alpha_th"] = *alpha;
    doc["feasible"] = feasible;
    doc["feasible_candidates"] = feasible_count;
  }
  if (feasible) {
    doc["partition"] = chosen;
    doc["effective_sum_rate"] = rate;
    doc["overhead"] = overhead;
  }

  std::ostringstream os;
  if (format == "json") {
    os << doc.dump(2) << '\n';
  } else {
    os << "k: " << k << "\nt: " << t << "\nsnr_db: " << format_number(snr) << "\nr: " << format_number(cfg.r)
       << '\n';
    if (constrained)
      os << "alpha_th: " << format_number(*alpha) << "\nfeasible_candidates: " << feasible_count
         << "\nstatus: " << (feasible ? "feasible" : "infeasible") << '\n';
    if (feasible)
      os << "partition: " << chosen << "\neffective_sum_rate: " << format_number(rate)
         << "\noverhead: " << format_number(overhead) << '\n';
  }
  if (!feasible) return {infeasible, os.str(), "no feasible partition under alpha_th"};
  return {ok, os.str(), {}};
}

template <typename Rows>
std::string render(const Rows& rows, const std::string& format) {
  std::ostringstream os;
  if (format == "json")
    os << to_json(rows).dump(2) << '\n';
  else
    write_csv(os, rows);
  return os.str();
}

inline command_result cmd_sweep(const std::string& command, const sim_config& cfg, const std::string& format) {
  cfg.validate();
  if (command == "rate-table") return {ok, render(build_rate_table(cfg), format), {}};
  const auto table = build_rate_table(cfg);
  if (command == "sweep-cct") return {ok, render(sweep_cct(cfg, table), format), {}};
  if (command == "sweep-aps") return {ok, render(sweep_aps(cfg, table), format), {}};
  return {ok, render(sweep_mao(cfg, table), format), {}};
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective sum-rate and overhead-aware partitioning of distributed MIMO networks", "dmimo"};
  app.require_subcommand(1);
  options opt;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"partitions", "List all partitions of a K x K network"},
      {"solve", "Optimal partition by exhaustive search"},
      {"solve-constrained", "Optimal partition under a maximum allowed overhead"},
      {"sweep-cct", "Normalized sum-rate vs frame length, with and without partitioning"},
      {"sweep-aps", "Ideal and effective normalized sum-rate vs network size"},
      {"sweep-mao", "Constrained / unconstrained sum-rate ratio vs maximum allowed overhead"},
      {"rate-table", "Monte Carlo mean ZFBF sum-rate per group size"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--k", opt.k, "Network size (comma list for sweeps)");
    sub->add_option("--snr-db", opt.snr_db, "SNR in dB (comma list for sweeps)");
    sub->add_option("--t", opt.t, "Frame length T in symbols (comma list for sweeps)");
    sub->add_option("--r", opt.r, "Overhead scaling exponent");
    sub->add_option("--alpha-th", opt.alpha_th, "Maximum allowed overhead fraction (comma list for sweeps)");
    sub->add_option("--trials", opt.trials, "Monte Carlo trials per group size");
    sub->add_option("--seed", opt.seed, "Base RNG seed");
    sub->add_option("--config", opt.config_path, "key = value scenario file");
    sub->add_option("--output", opt.output_path, "Write output here instead of stdout");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  command_result res;
  try {
    const auto cfg = resolve_config(command, opt);
    if (command == "partitions")
      res = cmd_partitions(cfg, opt.format);
    else if (command == "solve")
      res = cmd_solve(cfg, opt.format, false);
    else if (command == "solve-constrained")
      res = cmd_solve(cfg, opt.format, true);
    else
      res = cmd_sweep(command, cfg, opt.format);
  } catch (const size_limit& e) {
    err << "error: " << e.what() << '\n';
    return numeric;
  } catch (const ill_conditioned_channel& e) {
    err << "error: " << e.what() << '\n';
    return numeric;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }

  if (opt.output_path) {
    std::ofstream file(*opt.output_path, std::ios::binary);
    if (!file || !(file << res.body) || !file.flush()) {
      err << "error: cannot write " << *opt.output_path << '\n';
      return usage;
    }
  } else {
    out << res.body;
  }
  if (!res.message.empty()) err << res.message << '\n';
  return res.code;
}

}  // namespace dmimo::cli
