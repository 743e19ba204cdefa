#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qlnls/cli.hpp"

using namespace qlnls::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qlnls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qlnls_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = Config::parse("# top\n[scaling]\n eps = 0.4, 0.2 , 0.1  # trailing\nN=128\n\n[simulate]\nT = 2\n");
  CHECK(c.section("scaling").at("eps") == "0.4, 0.2 , 0.1");
  CHECK(c.section("scaling").at("N") == "128");
  CHECK(c.section("simulate").at("T") == "2");
  CHECK(c.section("missing").empty());
  CHECK_THROWS_AS(Config::parse("N = 3\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a]\njunk\n"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/qlnls.cfg"), ConfigError);

  Config o = c;
  o.apply_override("N=64", "scaling");
  o.apply_override("simulate.dt=1e-4", "scaling");
  CHECK(o.section("scaling").at("N") == "64");
  CHECK(o.section("simulate").at("dt") == "1e-4");
  CHECK_THROWS_AS(o.apply_override("nonsense", "scaling"), ConfigError);
}

TEST_CASE("resolution against defaults") {
  Config c;
  c.set("scaling", "N", "32");
  const auto r = resolve("scaling", c);
  CHECK(r.integer("N") == 32);
  CHECK(r.list("eps").size() == 4);
  CHECK(r.num("T") == 1.0);
  c.set("scaling", "bogus", "1");
  CHECK_THROWS_AS(resolve("scaling", c), ConfigError);
  CHECK_THROWS_AS(resolve("frobnicate", Config{}), ConfigError);
  Config bad;
  bad.set("simulate", "dt", "fast");
  CHECK_THROWS_AS(resolve("simulate", bad).num("dt"), ConfigError);
  bad.set("simulate", "dt", "-1");
  CHECK_THROWS_AS(resolve("simulate", bad).positive("dt"), ConfigError);
}

TEST_CASE("number formatting and atomic writes") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  const auto dir = scratch("atomic");
  fs::create_directories(dir);
  write_atomic(dir / "x.txt", "one");
  write_atomic(dir / "x.txt", "two");
  CHECK(slurp(dir / "x.txt") == "two");
  CHECK(!fs::exists(dir / "x.txt.tmp"));
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  const auto dir = scratch("usage");
  CHECK(invoke({"scaling", "--eps", "0.1", "--out", dir.string()}).status == 2);
  CHECK(invoke({"scaling", "--eps", "0.2,0.2,0.1", "--out", dir.string()}).status == 2);
  CHECK(invoke({"simulate", "--set", "nope=1", "--out", dir.string()}).status == 2);
  CHECK(invoke({"simulate", "--set", "scheme=euler", "--out", dir.string()}).status == 2);
  CHECK(invoke({"simulate", "--config", "/nonexistent.cfg"}).status == 2);
  CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("simulate writes a deterministic deviation CSV") {
  const auto dir = scratch("simulate");
  const std::vector<std::string> args{"simulate", "--out", dir.string(), "--set", "N=32", "--set", "epsilon=0.3",
                                      "--set", "T=0.05", "--set", "snapshot_every=10"};
  REQUIRE(invoke(args).status == 0);
  const auto first = slurp(dir / "deviation.csv");
  CHECK(first.find("# convention_tag: ") != std::string::npos);
  CHECK(first.find("# epsilon = 0.3") != std::string::npos);
  CHECK(body(first).rfind("t,dev_l2,dev_linf,dev_l1,l2_power,energy\n", 0) == 0);
  REQUIRE(invoke(args).status == 0);
  CHECK(slurp(dir / "deviation.csv") == first);

  std::istringstream in(body(first));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("simulate with zero amplitude gives zero deviations") {
  const auto dir = scratch("zero");
  REQUIRE(invoke({"simulate", "--out", dir.string(), "--set", "N=16", "--set", "epsilon=0.5", "--set", "amplitude=0",
                  "--set", "T=0.01"})
              .status == 0);
  std::istringstream in(body(slurp(dir / "deviation.csv")));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto rest = line.substr(line.find(',') + 1);
    CHECK(rest == "0,0,0,0,0");
  }
}

TEST_CASE("nf-check and report") {
  const auto dir = scratch("nfcheck");
  const auto r = invoke({"nf-check", "--nsym", "4", "--out", dir.string()});
  CHECK(r.status == 0);
  CHECK(fs::exists(dir / "identity_N4.txt"));
  const auto summary = nlohmann::json::parse(slurp(dir / "nf_check_summary.json"));
  CHECK(summary["pass"].get<bool>());
  CHECK(summary["config"]["nsym"] == "4");
  CHECK(summary.contains("convention_tag"));
  for (const auto& c : summary["criteria"]) {
    CHECK(c.contains("window"));
    CHECK(c.contains("residual"));
  }
  CHECK(invoke({"report", "--out", dir.string()}).status == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["pass"].get<bool>());
  CHECK(report["summaries"].contains("nf_check_summary.json"));

  // a failing summary propagates
  nlohmann::json failing = {{"command", "x"}, {"pass", false}, {"criteria", nlohmann::json::array()}};
  write_atomic(dir / "zz_summary.json", failing.dump());
  CHECK(invoke({"report", "--out", dir.string()}).status == 1);
  CHECK(invoke({"report", "--out", scratch("empty").string()}).status == 2);
}

TEST_CASE("oracle subcommand") {
  const auto dir = scratch("oracle");
  const auto r = invoke({"oracle", "--out", dir.string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  // an impossible tolerance turns into a criterion failure
  CHECK(invoke({"oracle", "--out", dir.string(), "--set", "plane_tol=1e-300"}).status == 1);
}

TEST_CASE("scaling subcommand on a cheap sweep") {
  const auto dir = scratch("scaling");
  const auto r = invoke({"scaling", "--out", dir.string(), "--eps", "0.4,0.3,0.2", "--set", "N=64", "--set", "T=0.1",
                         "--set", "threads=2"});
  CHECK((r.status == 0 || r.status == 1));
  const auto csv = body(slurp(dir / "scaling.csv"));
  CHECK(csv.rfind("eps,N,T,dt,dev_value,norm_p,norm_delta\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "scaling_summary.json"));
  CHECK(summary["criteria"].size() == 2);
  CHECK(summary["criteria"][0].contains("slope"));
}

TEST_CASE("nf-deviation subcommand on a cheap sweep") {
  const auto dir = scratch("nfdev");
  const auto r = invoke({"nf-deviation", "--out", dir.string(), "--eps", "0.6,0.5,0.4", "--set", "N=32", "--set",
                         "measure=nearness", "--set", "include_f2=false"});
  CHECK((r.status == 0 || r.status == 1));
  const auto summary = nlohmann::json::parse(slurp(dir / "nf_deviation_summary.json"));
  REQUIRE(summary["criteria"].size() == 3);
  CHECK(summary["criteria"][2]["pass"].get<bool>());  // l2 equality
  const auto csv = body(slurp(dir / "nf_deviation.csv"));
  CHECK(csv.rfind("quantity,eps,N,linf,l2,l1\n", 0) == 0);
  CHECK(invoke({"nf-deviation", "--out", dir.string(), "--set", "measure=everything"}).status == 2);
}

TEST_CASE("installed executable") {
  const char* exe = std::getenv("QLNLS_CLI");
  if (exe == nullptr) return;
  const auto dir = scratch("exe");
  const std::string base = std::string(exe) + " nf-check --nsym 2 --out " + dir.string() + " > /dev/null";
  CHECK(std::system(base.c_str()) == 0);
  const std::string bad = std::string(exe) + " scaling --eps 0.1 --out " + dir.string() + " > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
