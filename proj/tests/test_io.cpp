#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vtl/error.hpp"
#include "vtl/harness.hpp"
#include "vtl/io.hpp"

using namespace vtl;

namespace {
bool same(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t c = 0; c < a.size(); ++c)
    if (a[c] != b[c]) return false;
  return true;
}
}  // namespace

TEST_CASE("exponent round trip, including inf") {
  const Grid g = Grid::make(2, 0, 3, 1);
  const auto p = ExponentField::from_spec(g, "sin:2.5,0.5,0.5");
  std::stringstream ss;
  write_exponent(ss, p);
  const auto back = read_exponent(ss, g);
  for (std::size_t c = 0; c < p.size(); ++c) CHECK(back[c] == p[c]);
  REQUIRE(back.certificate());
  CHECK(back.certificate()->in_P);

  std::vector<double> vals(g.cell_count(), 2.0);
  vals[3] = INFINITY;
  std::stringstream s2;
  write_exponent(s2, ExponentField(g, vals));
  CHECK(std::isinf(read_exponent(s2, g)[3]));
}

TEST_CASE("load_exponent presets") {
  const Grid g = Grid::make(1, 1, 5, 2);
  CHECK(load_exponent(g, "const:3")[0] == 3.0);
  CHECK(load_exponent(g, "inf").all_infinite());
  const auto s = load_exponent(g, "step:1.5,3,0");
  CHECK(s[0] == 1.5);
  CHECK(s[g.cell_count() - 1] == 3.0);
  CHECK_THROWS_AS(load_exponent(g, "/nonexistent/p.txt"), InputError);
}

TEST_CASE("gridfn round trips, text and binary") {
  const Grid g = Grid::make(1, 0, 5, 2);
  const auto f = gen_bandlimited(g, 2, 0, 4.0);
  GridFunction z(g, false);
  for (std::size_t c = 0; c < g.cell_count(); ++c) z[c] = Complex(std::sin(0.1 * c), -1.0 / (1.0 + c));
  for (bool bin : {false, true})
    for (const GridFunction* h : {&f, static_cast<const GridFunction*>(&z)}) {
      std::stringstream ss;
      write_gridfn(ss, *h, bin);
      const auto back = read_gridfn(ss, g);
      CHECK(same(back, *h));
      CHECK(back.is_real() == h->is_real());
    }
}

TEST_CASE("fnseq and coefficient round trips") {
  const Grid g = Grid::make(2, 0, 3, 1);
  const auto lam = gen_coeffs(g, 6, 0.5, 0, 0.5);
  std::stringstream ss;
  write_coefficients(ss, lam);
  CHECK(read_coefficients(ss, g) == lam);

  FunctionSequence fs;
  fs.v_start = 1;
  fs.levels = {gen_bandlimited(g, 1, 0, 2.0), gen_bandlimited(g, 1, 1, 2.0)};
  std::stringstream s2;
  write_fnseq(s2, fs);
  const auto back = read_fnseq(s2, g);
  CHECK(back.v_start == 1);
  REQUIRE(back.levels.size() == 2);
  CHECK(same(back.levels[1], fs.levels[1]));
}

TEST_CASE("coefficient text with comments and cubes") {
  const Grid g = Grid::make(1, 0, 4, 2);
  std::istringstream in("# header\n0 0 1.5\n\n2 3 0.5 -2 # tail\n");
  const auto lam = read_coefficients(in, g);
  CHECK(lam.at(DyadicCube{0, {0, 0}}) == Complex(1.5, 0.0));
  CHECK(lam.at(DyadicCube{2, {3, 0}}) == Complex(0.5, -2.0));
  std::istringstream cubes("0 -1\n3 5\n");
  const auto Q = read_cubes(cubes, 1);
  REQUIRE(Q.size() == 2);
  CHECK(Q[1].v == 3);
  CHECK(Q[1].m[0] == 5);
}

TEST_CASE("malformed and mismatched input is rejected") {
  const Grid g = Grid::make(1, 0, 4, 2);
  const auto expect_bad_coeffs = [&](const char* text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_coefficients(in, g), InputError);
  };
  expect_bad_coeffs("0 0 abc\n");
  expect_bad_coeffs("5 0 1.0\n");    // level above V_max
  expect_bad_coeffs("1 99 1.0\n");   // outside the box
  expect_bad_coeffs("-1 0 1.0\n");
  std::istringstream wrong("gridfn 1 0 5 real\n");
  CHECK_THROWS_AS(read_gridfn(wrong, g), InputError);
  std::istringstream trunc("gridfn 1 0 4 real\n1 2 3\n");
  CHECK_THROWS_AS(read_gridfn(trunc, g), InputError);
  std::istringstream junk("hello\n");
  CHECK_THROWS_AS(read_exponent(junk, g), InputError);
  std::istringstream shortexp("exponent n=1 J=0 L=4\n2 2 2\n");
  CHECK_THROWS_AS(read_exponent(shortexp, g), InputError);
  CHECK_THROWS_AS(load_gridfn("/nonexistent/f", g), InputError);
  CHECK_THROWS_AS(load_coefficients("/nonexistent/c", g), InputError);
}

TEST_CASE("phi system export") {
  const auto sys = build_fj_system(1, 0, 5, 2, 64.0);
  std::ostringstream os;
  write_phisys(os, sys);
  const std::string text = os.str();
  CHECK(text.rfind("phisys 1 0 5 2", 0) == 0);
  for (const char* key : {"\nPhi ", "\nphi ", "\nPsi ", "\npsi ", "calderon_residual="})
    CHECK(text.find(key) != std::string::npos);
}
