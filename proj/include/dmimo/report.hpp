#pragma once

// CSV and JSON serialization of sweep rows and rate tables.
//
// Every sweep CSV shares one header:
//
//   k,t,snr_db,alpha_th,full_nsr,ideal_nsr,effective_nsr,ratio_pct,feasible,best_partition,stderr
//
// Cells that do not apply to a sweep are left empty. Numbers use the
// shortest round-trip representation with '.' as decimal separator,
// independent of the global locale.

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmimo/simulation.hpp"

namespace dmimo {

inline constexpr const char* sweep_csv_header =
    "k,t,snr_db,alpha_th,full_nsr,ideal_nsr,effective_nsr,ratio_pct,feasible,best_partition,stderr";

inline constexpr const char* rate_table_csv_header = "size,snr_db,mean_rate,stderr,trials";

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

namespace detail {

struct csv_line {
  std::string text;
  csv_line& cell(const std::string& s) {
    if (started) text += ',';
    started = true;
    text += s;
    return *this;
  }
  csv_line& num(double v) { return cell(format_number(v)); }
  csv_line& num(int v) { return cell(std::to_string(v)); }
  csv_line& empty() { return cell(""); }
  bool started = false;
};

}  // namespace detail

inline void write_csv(std::ostream& os, const std::vector<cct_row>& rows) {
  os << sweep_csv_header << '\n';
  for (const auto& r : rows) {
    detail::csv_line l;
    l.num(r.k).num(r.t).num(r.snr_db).empty().num(r.full_nsr).empty().num(r.partitioned_nsr).empty().empty()
        .cell(r.best_partition).num(r.partitioned_nsr_stderr);
    os << l.text << '\n';
  }
}

inline void write_csv(std::ostream& os, const std::vector<aps_row>& rows) {
  os << sweep_csv_header << '\n';
  for (const auto& r : rows) {
    detail::csv_line l;
    l.num(r.k).num(r.t).num(r.snr_db).empty().empty().num(r.ideal_nsr).num(r.effective_nsr).empty().empty()
        .cell(r.best_partition).num(r.effective_nsr_stderr);
    os << l.text << '\n';
  }
}

inline void write_csv(std::ostream& os, const std::vector<mao_row>& rows) {
  os << sweep_csv_header << '\n';
  for (const auto& r : rows) {
    detail::csv_line l;
    l.num(r.k).num(r.t).num(r.snr_db).num(r.alpha_th).empty().empty().empty().num(r.ratio_pct)
        .num(r.feasible ? 1 : 0).cell(r.chosen_partition).empty();
    os << l.text << '\n';
  }
}

inline void write_csv(std::ostream& os, const rate_table& table) {
  os << rate_table_csv_header << '\n';
  for (std::size_t s = 0; s < table.snr_db().size(); ++s)
    for (int j = 1; j <= table.k_max(); ++j) {
      detail::csv_line l;
      l.num(j).num(table.snr_db()[s]).num(table.mean(j, s)).num(table.standard_error(j, s)).num(table.trials());
      os << l.text << '\n';
    }
}

inline nlohmann::json to_json(const std::vector<cct_row>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"k", r.k},
                   {"t", r.t},
                   {"snr_db", r.snr_db},
                   {"full_rate", r.full_rate},
                   {"full_stderr", r.full_stderr},
                   {"partitioned_rate", r.partitioned_rate},
                   {"partitioned_stderr", r.partitioned_stderr},
                   {"full_nsr", r.full_nsr},
                   {"effective_nsr", r.partitioned_nsr},
                   {"stderr", r.partitioned_nsr_stderr},
                   {"best_partition", r.best_partition}});
  return out;
}

inline nlohmann::json to_json(const std::vector<aps_row>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"k", r.k},
                   {"t", r.t},
                   {"snr_db", r.snr_db},
                   {"ideal_rate", r.ideal_rate},
                   {"effective_rate", r.effective_rate},
                   {"overhead", r.overhead},
                   {"ideal_nsr", r.ideal_nsr},
                   {"effective_nsr", r.effective_nsr},
                   {"stderr", r.effective_nsr_stderr},
                   {"best_partition", r.best_partition}});
  return out;
}

inline nlohmann::json to_json(const std::vector<mao_row>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"k", r.k},
                   {"t", r.t},
                   {"snr_db", r.snr_db},
                   {"alpha_th", r.alpha_th},
                   {"optimal_rate", r.optimal_rate},
                   {"constrained_rate", r.constrained_rate},
                   {"ratio_pct", r.ratio_pct},
                   {"feasible", r.feasible},
                   {"best_partition", r.chosen_partition}});
  return out;
}

inline nlohmann::json to_json(const rate_table& table) {
  auto rows = nlohmann::json::array();
  for (std::size_t s = 0; s < table.snr_db().size(); ++s)
    for (int j = 1; j <= table.k_max(); ++j)
      rows.push_back({{"size", j},
                      {"snr_db", table.snr_db()[s]},
                      {"mean_rate", table.mean(j, s)},
                      {"stderr", table.standard_error(j, s)}});
  return {{"trials", table.trials()}, {"redraws", table.redraws()}, {"rows", rows}};
}

}  // namespace dmimo
