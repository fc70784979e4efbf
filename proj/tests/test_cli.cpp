#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "doctest.h"
#include "qres/config.hpp"
#include "qres/errors.hpp"
#include "qres_cli/cli.hpp"

namespace fs = std::filesystem;
using qres::cli::Request;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qres_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int call_main(std::vector<std::string> args) {
  args.insert(args.begin(), "qres");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return qres::cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(qres::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(qres::cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("subcommand list") {
  const auto& subs = qres::cli::subcommands();
  CHECK(subs == std::vector<std::string>{"temperature", "thermo", "linear-response", "cumulants", "lr-cumulants",
                                          "distribution", "verify-oracle"});
  CHECK_THROWS_AS(qres::cli::default_config("plot"), qres::Error);
}

TEST_CASE("temperature oscillates about the reservoir temperature") {
  Request req;
  req.subcommand = "temperature";
  req.out = fresh_dir("temperature");
  const auto outcome = qres::cli::run(req);
  CHECK(outcome.files == std::vector<std::string>{"temperature.csv", "manifest.json"});
  const auto rows = read_csv(req.out / "temperature.csv");
  REQUIRE(rows.size() == 802);
  CHECK(rows[0][3] == "T");
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double T = std::stod(rows[i][3]);
    lo = std::min(lo, T);
    hi = std::max(hi, T);
  }
  CHECK(lo < 1.5);
  CHECK(hi > 1.5);
}

TEST_CASE("reruns are byte identical and the manifest echoes the config") {
  for (const auto& sub : {"temperature", "thermo", "linear-response", "cumulants", "lr-cumulants", "distribution"}) {
    CAPTURE(sub);
    const std::string name = sub;
    const auto a = fresh_dir(name + "_a");
    const auto b = fresh_dir(name + "_b");
    Request req;
    req.subcommand = name;
    req.order = 3;
    req.m_max = 60;
    req.out = a;
    const auto first = qres::cli::run(req);
    req.out = b;
    const auto second = qres::cli::run(req);
    CHECK(first.files == second.files);
    for (const auto& f : first.files) {
      if (f == "manifest.json") continue;
      CAPTURE(f);
      CHECK(slurp(a / f) == slurp(b / f));
      const auto text = slurp(a / f);
      CHECK(text.find('\r') == std::string::npos);
    }
    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["subcommand"] == name);
    CHECK(manifest["config_sha256"].get<std::string>().size() == 64);
    CHECK(manifest.contains("wall_clock_seconds"));
    CHECK(manifest.contains("version"));
    const auto echoed = qres::parse_config(manifest["config"].dump());
    CHECK(echoed == qres::cli::default_config(name));
  }
}

TEST_CASE("params file overrides defaults") {
  const auto dir = fresh_dir("params");
  const auto cfg_path = dir / "override.json";
  std::ofstream(cfg_path) << R"({"system": {"gamma": 0.2}, "grid": {"n_samples": 11}})";
  Request req;
  req.subcommand = "cumulants";
  req.params = cfg_path;
  req.out = dir;
  req.order = 2;
  qres::cli::run(req);
  const auto rows = read_csv(dir / "cumulants.csv");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"t", "c1", "c2"});
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  const auto echoed = qres::parse_config(manifest["config"].dump());
  CHECK(echoed == qres::load_config(cfg_path, qres::cli::default_config("cumulants")));
  CHECK(echoed.system.gamma == 0.2);
}

TEST_CASE("zero-duration distribution") {
  Request req;
  req.subcommand = "distribution";
  req.out = fresh_dir("zero");
  req.at_time = 0.0;
  req.m_max = 10;
  qres::cli::run(req);
  const auto rows = read_csv(req.out / "distribution.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"m", "p"});
  CHECK(rows[1] == std::vector<std::string>{"0", "1"});
}

TEST_CASE("failures exit nonzero with a machine-readable report") {
  const auto dir = fresh_dir("errors");
  CHECK(call_main({"temperature", "--seedless", "--out", dir.string()}) == 2);
  CHECK(nlohmann::json::parse(slurp(dir / "error.json"))["error"]["kind"] == "config");

  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"system": {"gama": 0.1}})";
  fs::remove(dir / "error.json");
  CHECK(call_main({"thermo", "--params", bad.string(), "--out", dir.string()}) == 2);
  const auto report = nlohmann::json::parse(slurp(dir / "error.json"));
  CHECK(report["error"]["kind"] == "config");
  CHECK(report["error"]["subcommand"] == "thermo");

  const auto square = dir / "square.json";
  std::ofstream(square) << R"({"drive": {"kind": "square"}})";
  CHECK(call_main({"linear-response", "--params", square.string(), "--out", dir.string()}) != 0);

  const auto negative = dir / "negative.json";
  std::ofstream(negative) << R"({"system": {"T_e": -1.0}})";
  CHECK(call_main({"temperature", "--params", negative.string(), "--out", dir.string()}) != 0);

  CHECK(call_main({"cumulants", "--order", "9", "--out", dir.string()}) != 0);
  CHECK(nlohmann::json::parse(slurp(dir / "error.json"))["error"]["kind"] == "order_overflow");

  CHECK(call_main({"--out", dir.string()}) != 0);
  CHECK(call_main({"temperature", "--out", dir.string()}) == 0);
}

TEST_CASE("verify-oracle reports every check passing") {
  Request req;
  req.subcommand = "verify-oracle";
  req.out = fresh_dir("oracle");
  const auto outcome = qres::cli::run(req);
  CHECK(outcome.files == std::vector<std::string>{"oracle_distances.csv", "oracle_report.json", "manifest.json"});
  const auto rows = read_csv(req.out / "oracle_distances.csv");
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == std::vector<std::string>{"name", "value", "threshold", "passed", "seconds"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CAPTURE(rows[i][0]);
    CHECK(rows[i][3] == "1");
    CHECK(std::stod(rows[i][1]) <= std::stod(rows[i][2]));
  }
}
