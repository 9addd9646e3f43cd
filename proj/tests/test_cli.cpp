#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "onestep/cli.hpp"

namespace fs = std::filesystem;
using namespace onestep::cli;

namespace {

const std::string kModel = ONESTEP_SOURCE_DIR "/models/predator_prey.model";
const std::string kGolden = ONESTEP_SOURCE_DIR "/tests/golden/predator_prey.coef";

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) {
  fs::path dir = fs::path(ONESTEP_TEST_TMP) / "cli_tmp";
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove(p);
  return p.string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("compile") {
  auto r = run_cli({"compile", kModel, "--out", "-"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == read_file(kGolden));
  CHECK(r.err.find("A[1] = -k2*x*y+k1*x") != std::string::npos);
  CHECK(r.err.find("B[2,2] = k2*x*y+k3*y") != std::string::npos);

  auto path = tmp("pp.coef");
  r = run_cli({"compile", kModel, "--out", path});
  CHECK(r.code == kExitOk);
  CHECK(read_file(path) == read_file(kGolden));
  CHECK(r.out.find("B[1,2] = -k2*x*y") != std::string::npos);

  auto bad = tmp("bad.model");
  write_file(bad, "species x\nreaction x -> q @ k\n");
  auto out = tmp("bad.coef");
  r = run_cli({"compile", bad, "--out", out});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  CHECK(run_cli({"compile", tmp("missing.model")}).code == kExitUsage);
}

TEST_CASE("simulate writes the trajectory CSV") {
  auto r = run_cli({"simulate", kModel, "--method", "srk3", "--param", "k1=10", "--param",
                    "k2=1.5", "--param", "k3=8.5", "--init", "x=9.7", "--init", "y=6.77",
                    "--t-end", "20", "--step", "1e-3", "--seed", "42"});
  REQUIRE(r.code == kExitOk);
  auto ls = lines(r.out);
  REQUIRE(ls.size() > 3);
  CHECK(ls[0].starts_with("# seed=42 method=srk3 h=0.001 rng="));
  CHECK(ls[0].find("params=k1=10;k2=1.5;k3=8.5") != std::string::npos);
  CHECK(ls[1] == "t,x,y");
  CHECK(ls[2] == "0,9.6999999999999993,6.7699999999999996");
  CHECK(ls.back().starts_with("# absorbed t="));

  r = run_cli({"simulate", kModel, "--method", "rk4-det", "--t-end", "10", "--step", "1e-3",
               "--init", "x=9.7", "--init", "y=6.77", "--seed", "1"});
  REQUIRE(r.code == kExitOk);
  ls = lines(r.out);
  CHECK(ls.size() == 2 + 10001);
  CHECK(ls.back().starts_with("10,"));
}

TEST_CASE("simulate with ssa and coefficient-file input") {
  auto r = run_cli({"simulate", kModel, "--method", "ssa", "--t-end", "1", "--step", "0.1",
                    "--seed", "3"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out)[0].starts_with("# seed=3 method=ssa h=0.1"));

  r = run_cli({"simulate", kModel, "--method", "ssa", "--t-end", "1", "--step", "0.1",
               "--init", "x=9.5"});
  CHECK(r.code == kExitUsage);

  auto coef = tmp("input.coef");
  write_file(coef, read_file(kGolden));
  r = run_cli({"simulate", coef, "--species", "x,y", "--param", "k1=10", "--param", "k2=1.5",
               "--param", "k3=8.5", "--init", "x=9.7", "--init", "y=6.77", "--t-end", "1",
               "--step", "0.01", "--seed", "42"});
  REQUIRE(r.code == kExitOk);
  auto direct = run_cli({"simulate", kModel, "--param", "k1=10", "--param", "k2=1.5", "--param",
                         "k3=8.5", "--init", "x=9.7", "--init", "y=6.77", "--t-end", "1",
                         "--step", "0.01", "--seed", "42"});
  // Same numbers, only the model path in the header differs.
  auto a = lines(r.out), b = lines(direct.out);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(a[k] == b[k]);

  CHECK(run_cli({"simulate", coef, "--t-end", "1", "--step", "0.1"}).code == kExitUsage);
  CHECK(run_cli({"simulate", coef, "--species", "x,y", "--method", "ssa", "--param", "k1=1",
                 "--param", "k2=1", "--param", "k3=1", "--init", "x=1", "--init", "y=1",
                 "--t-end", "1", "--step", "0.1"})
            .code == kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == kExitUsage);
  CHECK(run_cli({"simulate", kModel, "--t-end", "1", "--step", "0"}).code == kExitUsage);
  CHECK(run_cli({"simulate", kModel, "--t-end", "1"}).code == kExitUsage);
  CHECK(run_cli({"simulate", kModel, "--t-end", "1", "--step", "0.1", "--method", "rk9"}).code ==
        kExitUsage);
  CHECK(run_cli({"simulate", kModel, "--t-end", "1", "--step", "0.1", "--param", "zz=1"}).code ==
        kExitUsage);
  CHECK(run_cli({"simulate", kModel, "--t-end", "1", "--step", "0.1", "--param", "k1"}).code ==
        kExitUsage);
  CHECK(run_cli({"simulate", kModel, "--t-end", "1", "--step", "0.1", "--init", "z=1"}).code ==
        kExitUsage);
  CHECK(run_cli({"ensemble", kModel, "--t-end", "1", "--step", "0.1", "--runs", "0"}).code ==
        kExitUsage);

  auto nodefault = tmp("nodefault.model");
  write_file(nodefault, "species x\ninit x=3\nreaction x -> 0 @ k\n");
  auto r = run_cli({"simulate", nodefault, "--t-end", "1", "--step", "0.1"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("missing value for parameter(s): k") != std::string::npos);
  CHECK(run_cli({"simulate", nodefault, "--t-end", "1", "--step", "0.1", "--param", "k=1"}).code ==
        kExitOk);
}

TEST_CASE("runtime failure leaves no output file") {
  auto coef = tmp("notpsd.coef");
  write_file(coef, "# A\n0\n# B\nx-2\n");
  auto out = tmp("notpsd.csv");
  auto r = run_cli({"simulate", coef, "--species", "x", "--init", "x=1", "--t-end", "1",
                    "--step", "0.1", "--no-absorb", "--out", out});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("not PSD") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("seed is generated and echoed when omitted") {
  auto r = run_cli({"simulate", kModel, "--t-end", "0.01", "--step", "0.001"});
  REQUIRE(r.code == kExitOk);
  auto first = lines(r.out)[0];
  CHECK(first.starts_with("# seed="));
  auto seed = first.substr(7, first.find(' ', 7) - 7);
  auto again = run_cli({"simulate", kModel, "--t-end", "0.01", "--step", "0.001", "--seed", seed});
  CHECK(again.out == r.out);
}

TEST_CASE("ensemble output") {
  auto r = run_cli({"ensemble", kModel, "--runs", "1", "--t-end", "0.5", "--step", "0.01",
                    "--seed", "8"});
  REQUIRE(r.code == kExitOk);
  auto ls = lines(r.out);
  CHECK(ls[0].starts_with("# seed=8 method=srk3 h=0.01 runs=1 rng="));
  CHECK(ls[1] == "t,mean_x,mean_y,var_x,var_y,absorbed_fraction");
  auto single = lines(run_cli({"simulate", kModel, "--t-end", "0.5", "--step", "0.01", "--seed",
                               "8"}).out);
  REQUIRE(ls.size() == single.size());
  for (std::size_t k = 2; k < ls.size(); ++k) CHECK(ls[k] == single[k] + ",0,0,0");

  auto path_a = tmp("ens_a.csv");
  auto path_b = tmp("ens_b.csv");
  std::vector<std::string> args{"ensemble", kModel, "--runs", "40", "--t-end", "1", "--step",
                                "0.01", "--seed", "17", "--threads", "3", "--out"};
  auto a = args, b = args;
  a.push_back(path_a);
  b.push_back(path_b);
  b[11] = "1";  // thread count must not matter
  REQUIRE(run_cli(a).code == kExitOk);
  REQUIRE(run_cli(b).code == kExitOk);
  CHECK(read_file(path_a) == read_file(path_b));
}
