#pragma once

// Flat key = value scenario files. Lists are comma separated; '#' starts a
// comment. Example:
//
//   k_values = 2,3,4,5,6,7,8,9
//   snr_db   = 25
//   t_values = 20,50,100,200,500,1000,2000
//   r        = 2
//   trials   = 2000
//   seed     = 1
//   alpha_th = 0,0.25,0.5,0.75,1

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dmimo/error.hpp"
#include "dmimo/simulation.hpp"

namespace dmimo {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw config_error("bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_number<T>(text.substr(pos, comma - pos), key));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

// Applies one key to cfg; unknown keys are an error.
inline void apply_config_value(sim_config& cfg, std::string_view key, std::string_view value) {
  using detail::parse_list;
  using detail::parse_number;
  if (key == "k_values" || key == "k")
    cfg.k_values = parse_list<int>(value, key);
  else if (key == "k_max") {
    const int k_max = parse_number<int>(value, key);
    cfg.k_values.clear();
    for (int k = 1; k <= k_max; ++k) cfg.k_values.push_back(k);
  } else if (key == "snr_db")
    cfg.snr_db = parse_list<double>(value, key);
  else if (key == "t_values" || key == "t")
    cfg.t_values = parse_list<int>(value, key);
  else if (key == "r")
    cfg.r = parse_number<double>(value, key);
  else if (key == "trials")
    cfg.trials = parse_number<int>(value, key);
  else if (key == "seed" || key == "base_seed")
    cfg.base_seed = parse_number<std::uint64_t>(value, key);
  else if (key == "alpha_th" || key == "alpha_th_values")
    cfg.alpha_th_values = parse_list<double>(value, key);
  else if (key == "ref_k")
    cfg.ref_k = parse_number<int>(value, key);
  else if (key == "ref_snr_db")
    cfg.ref_snr_db = parse_number<double>(value, key);
  else if (key == "ref_t")
    cfg.ref_t = parse_number<int>(value, key);
  else if (key == "threads")
    cfg.threads = parse_number<unsigned>(value, key);
  else
    throw config_error("unknown config key '" + std::string(key) + "'");
}

inline void read_config(std::istream& in, sim_config& cfg) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw config_error("line " + std::to_string(line_no) + ": expected key = value");
    apply_config_value(cfg, detail::trim(view.substr(0, eq)), detail::trim(view.substr(eq + 1)));
  }
}

inline void read_config_file(const std::string& path, sim_config& cfg) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path);
  read_config(in, cfg);
}

}  // namespace dmimo
