#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "dmimo/cli.hpp"

using namespace dmimo;
namespace fs = std::filesystem;

namespace {

struct run_result {
  int code;
  std::string out;
  std::string err;
};

run_result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dmimo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

struct temp_dir {
  fs::path path;
  temp_dir() : path(fs::temp_directory_path() / ("dmimo_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~temp_dir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("partitions command", "[cli]") {
  auto r = run({"partitions", "--k", "4"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "5 partitions\n4\n3+1\n2+2\n2+1+1\n1+1+1+1\n");

  r = run({"partitions", "--k", "1"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "1 partitions\n1\n");

  r = run({"partitions", "--k", "10"});
  REQUIRE(r.out.rfind("42 partitions\n", 0) == 0);

  REQUIRE(run({"partitions", "--k", "31"}).code == cli::numeric);
  REQUIRE(run({"partitions"}).code == cli::usage);

  r = run({"partitions", "--k", "3", "--format", "json"});
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["count"] == 3);
  REQUIRE(doc["partitions"][1]["label"] == "2x2+1x1");
}

TEST_CASE("solve commands", "[cli]") {
  auto r = run({"solve-constrained", "--k", "4", "--t", "100", "--r", "2", "--alpha-th", "0.05", "--trials", "200"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("partition: 4*(1x1)\n") != std::string::npos);
  REQUIRE(r.out.find("overhead: 0.04\n") != std::string::npos);
  REQUIRE(r.out.find("status: feasible\n") != std::string::npos);

  r = run({"solve", "--k", "1", "--t", "100", "--trials", "50"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("partition: 1x1\n") != std::string::npos);

  r = run({"solve-constrained", "--k", "4", "--t", "100", "--alpha-th", "0", "--trials", "50"});
  REQUIRE(r.code == cli::infeasible);
  REQUIRE(r.err.find("no feasible partition under alpha_th") != std::string::npos);

  r = run({"solve", "--k", "5", "--t", "50", "--snr-db", "30", "--trials", "50", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["k"] == 5);
  REQUIRE(doc["effective_sum_rate"].get<double>() > 0.0);

  REQUIRE(run({"solve", "--t", "100"}).code == cli::usage);
  REQUIRE(run({"solve-constrained", "--k", "4", "--t", "100"}).code == cli::usage);
  REQUIRE(run({"solve", "--k", "4", "--t", "100", "--format", "xml"}).code == cli::usage);
  REQUIRE(run({"solve", "--k", "4,5", "--t", "100"}).code == cli::usage);
  REQUIRE(run({"bogus"}).code == cli::usage);
}

TEST_CASE("sweep commands write reproducible CSV", "[cli]") {
  temp_dir tmp;
  const auto cfg_path = tmp.path / "mao.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "k_values = 3,4,5\nsnr_db = 25\nt_values = 50,100\ntrials = 60\nseed = 5\n"
           "alpha_th = 0,0.1,0.2,0.3,0.5,1\n";
  }
  const auto a = tmp.path / "a.csv";
  const auto b = tmp.path / "b.csv";
  REQUIRE(run({"sweep-mao", "--config", cfg_path.string(), "--output", a.string()}).code == 0);
  REQUIRE(run({"sweep-mao", "--config", cfg_path.string(), "--output", b.string()}).code == 0);
  const auto text = slurp(a);
  REQUIRE(text == slurp(b));
  REQUIRE(text.back() == '\n');

  const auto rows = parse_csv(text);
  REQUIRE(rows.front().size() == 11);
  REQUIRE(rows.size() == 1 + 3 * 2 * 6);
  for (std::size_t i = 2; i < rows.size(); ++i)
    if (rows[i][0] == rows[i - 1][0] && rows[i][1] == rows[i - 1][1] && rows[i][2] == rows[i - 1][2])
      REQUIRE(std::stod(rows[i][7]) >= std::stod(rows[i - 1][7]));

  // Recompute one row through the library.
  sim_config cfg;
  read_config_file(cfg_path.string(), cfg);
  const auto table = build_rate_table(cfg);
  const auto& row = rows[1 + 2 * 6 + 4];  // k=4, t=50, alpha 0.5
  REQUIRE(row[0] == "4");
  REQUIRE(row[1] == "50");
  REQUIRE(row[3] == "0.5");
  const overhead_params oh{2.0, 50};
  const double optimum = optimal_partition(4, table.rates_at(0), oh).best.effective_rate;
  const auto sol = solve_constrained(4, table.rates_at(0), oh, 0.5);
  REQUIRE(sol.chosen);
  REQUIRE(std::abs(std::stod(row[7]) - 100.0 * sol.chosen->profit / optimum) <= 1e-9);
  REQUIRE(row[9] == sol.chosen->composition.label());

  // Flags override the file.
  const auto c = tmp.path / "c.csv";
  REQUIRE(run({"sweep-mao", "--config", cfg_path.string(), "--k", "3", "--output", c.string()}).code == 0);
  REQUIRE(parse_csv(slurp(c)).size() == 1 + 2 * 6);
}

TEST_CASE("sweep command errors", "[cli]") {
  temp_dir tmp;
  const auto cfg_path = tmp.path / "empty.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "t_values =\n";
  }
  const auto out = tmp.path / "never.csv";
  REQUIRE(run({"sweep-cct", "--config", cfg_path.string(), "--output", out.string()}).code == cli::usage);
  REQUIRE_FALSE(fs::exists(out));

  REQUIRE(run({"sweep-mao", "--k", "3", "--t", "100", "--trials", "5", "--output", "/nonexistent/dir/x.csv"}).code ==
          cli::usage);
  REQUIRE(run({"sweep-cct", "--k", "3,5", "--trials", "5"}).code == cli::usage);  // no K=9 reference
  REQUIRE(run({"sweep-mao", "--config", (tmp.path / "missing.cfg").string()}).code == cli::usage);
}

TEST_CASE("sweep-cct, sweep-aps and rate-table outputs", "[cli]") {
  auto r = run({"sweep-cct", "--k", "3,9", "--t", "20,100,2000", "--trials", "40"});
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows[0][0] == "k");
  REQUIRE(rows.size() == 1 + 2 * 3);
  REQUIRE(rows.back()[6] == "1");  // K=9, largest T is the reference

  r = run({"sweep-aps", "--k", "8,9", "--snr-db", "30", "--t", "100", "--trials", "40", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 2);
  REQUIRE(doc[1]["ideal_nsr"] == 1.0);

  r = run({"rate-table", "--k", "3", "--snr-db", "10,20", "--trials", "30"});
  REQUIRE(r.code == 0);
  rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 6);
  REQUIRE(rows[0] == std::vector<std::string>{"size", "snr_db", "mean_rate", "stderr", "trials"});
}
