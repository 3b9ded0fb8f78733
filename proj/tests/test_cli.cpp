#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "vtl/harness.hpp"
#include "vtl/io.hpp"
#include "vtl/sequence.hpp"

using namespace vtl;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(VTL_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int st = pclose(pipe);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vtl_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("norm lp of a unit indicator and of zero") {
  const Grid g = Grid::make(1, 0, 4, 2);
  const auto ind = GridFunction::indicator(g, DyadicCube{0, {0, 0}});
  const auto p1 = scratch("ind.txt"), p0 = scratch("zero.txt");
  { std::ofstream(p1) << ""; std::ofstream os(p1); write_gridfn(os, ind); }
  { std::ofstream os(p0); write_gridfn(os, GridFunction(g)); }
  const std::string grid = "--J 0 --L 4 --Vmax 2 ";
  auto r = run(grid + "norm --kind lp --p const:3 " + p1.string());
  CHECK(r.code == 0);
  CHECK(r.out == "1.000000000000\n");
  r = run(grid + "norm --kind lp --p sin:2,0.5,1 " + p0.string());
  CHECK(r.code == 0);
  CHECK(r.out == "0.000000000000\n");
}

TEST_CASE("btilde --hex is bit-identical to the library") {
  const Grid g = Grid::make(1, 1, 7, 4);
  const auto lam = gen_coeffs(g, 5, 0.5);
  const auto path = scratch("lam.txt");
  { std::ofstream os(path); write_coefficients(os, lam); }
  const auto back = load_coefficients(path.string(), g);
  const double v = norm_btilde(back, ExponentField::from_spec(g, "sin:0,0.3,1"), ExponentField::from_spec(g, "sin:2.5,0.5,0.5"),
                               ExponentField::from_spec(g, "sin:2,0.4,0.5")).value;
  char expect[64];
  std::snprintf(expect, sizeof expect, "%a\n", v);
  const auto r = run("--J 1 --L 7 --Vmax 4 --hex norm --kind btilde --p sin:2.5,0.5,0.5 --q sin:2,0.4,0.5 "
                     "--alpha sin:0,0.3,1 " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out == expect);
}

TEST_CASE("verify exit codes") {
  CHECK(run("--seed 7 verify --suite lemma45 --trials 100").code == 0);
  CHECK(run("--L 8 --Vmax 5 verify --suite roundtrip --trials 10").code == 0);
  CHECK(run("verify --suite nosuch").code == 2);
  CHECK(run("--bogus").code == 2);
  const auto out = run("--L 7 --Vmax 4 verify --suite lux --trials 5").out;
  CHECK(out.find("suite=lux") != std::string::npos);
  CHECK(out.find("pass=true") != std::string::npos);
}

TEST_CASE("phicheck exit codes") {
  auto r = run("phicheck");
  CHECK(r.code == 0);
  CHECK(r.out.find("pass=true") != std::string::npos);
  CHECK(run("--Vmax 1 phicheck").code == 0);
  CHECK(run("--L 3 --Vmax 2 phicheck").code == 4);
}

TEST_CASE("input and class errors") {
  const auto bad = scratch("bad.txt");
  { std::ofstream(bad) << "0 0 notanumber\n"; }
  const std::string grid = "--J 0 --L 4 --Vmax 2 ";
  CHECK(run(grid + "norm --kind btilde " + bad.string()).code == 2);
  CHECK(run(grid + "norm --kind btilde /nonexistent/x").code == 2);
  const auto c = scratch("one.txt");
  { std::ofstream(c) << "0 0 1.0\n"; }
  CHECK(run(grid + "norm --kind btilde --alpha inf " + c.string()).code == 3);
  CHECK(run(grid + "norm --kind btilde --p step:2,inf,0 " + c.string()).code == 3);
  CHECK(run(grid + "norm --kind btilde --p const:0 " + c.string()).code == 3);
  CHECK(run(grid + "norm --kind btilde --p const:0.5 " + c.string()).code == 0);  // quasi-norm range is admissible
}

TEST_CASE("pair") {
  const auto a = scratch("pa.txt"), b = scratch("pb.txt");
  { std::ofstream(a) << "0 0 1 2\n"; }
  { std::ofstream(b) << "0 0 0 1\n1 1 3\n"; }
  const auto r = run("--J 0 --L 4 --Vmax 2 pair " + a.string() + " " + b.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("2.000000000000") != std::string::npos);
  CHECK(r.out.find("1.000000000000") != std::string::npos);
  const auto r2 = run("--J 0 --L 4 --Vmax 2 pair --q const:2 " + a.string() + " " + b.string());
  CHECK(r2.code == 0);
  CHECK(r2.out.find("ratio") != std::string::npos);
}
