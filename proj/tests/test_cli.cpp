#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polar/cli.hpp"

using namespace polar::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "polarctl_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("config text round trips") {
  const auto cfg = ExperimentConfig::parse("# comment\nkernel = 10;11\n eps=0.3 \n\nn = 12,16 # sweep\n");
  CHECK(cfg.get("kernel") == "10;11");
  CHECK(cfg.get("eps") == "0.3");
  CHECK(cfg.get("n") == "12,16");
  CHECK_FALSE(cfg.get("rate").has_value());
  const auto again = ExperimentConfig::parse(cfg.to_text());
  CHECK(again.values == cfg.values);
  CHECK(again.to_text() == cfg.to_text());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(ExperimentConfig::parse("kernel"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("colour = red"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("eps = 0.1\neps = 0.2"), ConfigError);
  for (const auto& key : config_keys()) CHECK(key != "config");
}

TEST_CASE("kernel-analyze") {
  const auto r = run({"kernel-analyze", "--kernel", "10;11"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"exponent\":0.5") != std::string::npos);
  CHECK(r.out.find("\"second_exponent\":0.25") != std::string::npos);
  const auto r3 = run({"kernel-analyze", "--kernel", "100;110;101"});
  CHECK(r3.out.find("\"partial_distances\":[1,2,2]") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"kernel-analyze", "--kernel", "10;01"}).code == kExitInvalidKernel);
  CHECK(run({"kernel-analyze", "--kernel", "1x;01"}).code == kExitInvalidKernel);
  CHECK(run({"polarize", "--n", "30"}).code == kExitBudget);
  CHECK(run({"polarize", "--n", "12", "--budget", "100"}).code == kExitBudget);
  CHECK(run({"polarize", "--eps", "abc"}).code == kExitBadConfig);
  CHECK(run({"polarize", "--eps", "1.5"}).code == kExitBadConfig);
  CHECK(run({"polarize", "--config", "/nonexistent/file.cfg"}).code == kExitBadConfig);
  CHECK(run({"no-such-command"}).code == kExitBadConfig);
  CHECK(run({}).code == kExitBadConfig);
  CHECK(run({"selection-compare", "--n", "10", "--rules", "polar,magic"}).code == kExitBadConfig);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("prefix too deep maps to the budget exit code") {
  const auto r = run({"selection-compare", "--n", "12", "--rules", "hybrid", "--m", "12", "--budget", "2048"});
  CHECK(r.code == kExitBudget);
}

TEST_CASE("flags override the config file") {
  const auto dir = temp_dir();
  const auto cfg = dir / "override.cfg";
  std::ofstream(cfg) << "kernel = 10;11\neps = 0.5\nn = 4\n";
  const auto a = run({"polarize", "--config", cfg.string()});
  CHECK(a.code == kExitOk);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 17);
  const auto b = run({"polarize", "--config", cfg.string(), "--n", "5"});
  CHECK(std::count(b.out.begin(), b.out.end(), '\n') == 33);
  std::ofstream(dir / "bad.cfg") << "eps = 0.5\nwhatever = 1\n";
  CHECK(run({"polarize", "--config", (dir / "bad.cfg").string()}).code == kExitBadConfig);
}

TEST_CASE("CSV headers") {
  CHECK(first_line(run({"polarize", "--n", "3"}).out) == "index,mode,payload,loglog,source");
  CHECK(first_line(run({"scaling-verify", "--n", "8", "--t", "0"}).out) == "n,t,nu,exact_F,predicted,abs_error,source");
  CHECK(first_line(run({"exponent-verify", "--n", "8"}).out) == "n,beta,fraction,source");
  CHECK(first_line(run({"selection-compare", "--n", "8", "--rules", "polar"}).out) ==
        "n,rule,rate,size,shortfall,union_bound_loglog,union_neglog,sc_lower_loglog,dmin,map_lower_loglog,"
        "overlap_with_rm");
  CHECK(first_line(run({"map-bound", "--n", "8"}).out) ==
        "n,rate,dmin_upper,map_lower_loglog,sc_union_loglog,theorem3_rhs");
  CHECK(first_line(run({"codec-sim", "--n", "6", "--trials", "10"}).out).rfind("eps,n,rate,trials", 0) == 0);
}

TEST_CASE("scaling-verify is non-increasing in t") {
  const auto r = run({"scaling-verify", "--n", "14", "--t", "-2,-1,0,1,2,3"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  double prev = 2.0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    const double exact = std::stod(f[3]);
    CHECK(exact <= prev);
    prev = exact;
  }
}

TEST_CASE("exponent-verify at beta = E equals scaling-verify at t = 0") {
  const auto a = run({"exponent-verify", "--n", "12", "--beta", "0.5"});
  const auto b = run({"scaling-verify", "--n", "12", "--t", "0"});
  auto field = [](const std::string& csv, int col) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::istringstream ls(line);
    std::string cell;
    for (int k = 0; k <= col; ++k) std::getline(ls, cell, ',');
    return cell;
  };
  CHECK(field(a.out, 2) == field(b.out, 3));
}

TEST_CASE("map-bound for Arikan uses the shared exponent") {
  const auto r = run({"map-bound", "--n", "16", "--rate", "0.1,0.25,0.4"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  long long prev_dmin = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    const long long dmin = std::stoll(f[2]);
    if (prev_dmin >= 0) CHECK(dmin <= prev_dmin);
    prev_dmin = dmin;
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("outputs go to --out and are reproducible") {
  const auto dir = temp_dir();
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"polarize", "--n", "6", "--method", "montecarlo", "--paths", "500"},
           {"codec-sim", "--n", "6", "--trials", "200", "--seed", "5"},
           {"selection-compare", "--n", "8", "--rules", "polar,rm,hybrid,hybrid-recursive", "--m", "3"}}) {
    auto args_a = cmd;
    args_a.insert(args_a.end(), {"--out", (dir / "a.out").string()});
    auto args_b = cmd;
    args_b.insert(args_b.end(), {"--out", (dir / "b.out").string()});
    REQUIRE(run(args_a).code == kExitOk);
    REQUIRE(run(args_b).code == kExitOk);
    CHECK(read(dir / "a.out") == read(dir / "b.out"));
    CHECK_FALSE(read(dir / "a.out").empty());
  }
}

TEST_CASE("selection export") {
  const auto dir = temp_dir() / "export";
  std::filesystem::create_directories(dir);
  const auto r = run({"selection-compare", "--n", "6", "--rules", "polar", "--export", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(read(dir / "polar_n6.csv").rfind("index\n", 0) == 0);
  CHECK(read(dir / "polar_n6.json").find("\"rule\":\"polar\"") != std::string::npos);
}
