#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vtl/error.hpp"
#include "vtl/exponent.hpp"

using namespace vtl;

namespace {

// Plain double loop over all pairs of cell centres.
double c_local_brute(const ExponentField& g) {
  const Grid& gr = g.grid();
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const auto x = gr.cell_center(i), y = gr.cell_center(j);
      const double d = std::hypot(x[0] - y[0], x[1] - y[1]);
      best = std::max(best, std::abs(g[i] - g[j]) * std::log(std::numbers::e + 1.0 / d));
    }
  return best;
}

}  // namespace

TEST_CASE("presets parse and evaluate") {
  const Grid g = Grid::make(1, 1, 5, 2);
  const auto p = ExponentField::from_spec(g, "sin:2,0.5,1");
  for (std::size_t c = 0; c < g.cell_count(); c += 5) {
    const double x = g.cell_center(c)[0];
    CHECK(p[c] == doctest::Approx(2.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x)));
  }
  const auto s = ExponentField::from_spec(g, "step:2,4,0.5");
  for (std::size_t c = 0; c < g.cell_count(); ++c) CHECK(s[c] == (g.cell_center(c)[0] < 0.5 ? 2.0 : 4.0));
  CHECK(ExponentField::from_spec(g, "inf").all_infinite());
  CHECK_THROWS_AS(ExponentField::from_spec(g, "cosine:1"), InputError);
  CHECK_THROWS_AS(ExponentField::from_spec(g, "sin:1,2"), InputError);
  CHECK_THROWS_AS(ExponentField::from_spec(g, "const:abc"), InputError);
  CHECK(Preset::parse("step:2,4,0.5").str() == "step:2,4,0.5");
}

TEST_CASE("classification of simple exponents") {
  const Grid g = Grid::make(1, 1, 7, 3);
  const auto two = classify(ExponentField::constant(g, 2.0));
  CHECK(two.in_P0);
  CHECK(two.in_P);
  CHECK(two.plog);
  CHECK(two.c_local_recip == 0.0);

  const auto half = classify(ExponentField::constant(g, 0.5));
  CHECK(half.in_P0);
  CHECK_FALSE(half.in_P);
  CHECK(half.p_minus == 0.5);

  const auto jump = ExponentField::from_spec(g, "step:2,3,0.25");
  REQUIRE(jump.certificate());
  CHECK(jump.certificate()->refinement_checked);
  CHECK(jump.certificate()->violated_at_refinement);
  CHECK_FALSE(jump.certificate()->plog);

  const auto smooth = ExponentField::from_spec(g, "sin:2,0.3,0.5");
  REQUIRE(smooth.certificate());
  CHECK_FALSE(smooth.certificate()->violated_at_refinement);
  CHECK(smooth.certificate()->plog);
}

TEST_CASE("log-Holder estimate agrees with the all-pairs loop") {
  const Grid g = Grid::make(1, 0, 6, 2);
  const auto p = ExponentField::from_spec(g, "sin:0.4,0.2,1.5");
  CHECK(estimate_log_holder_constants(p).c_local == doctest::Approx(c_local_brute(p)).epsilon(1e-12));
  const Grid g2 = Grid::make(2, 0, 3, 1);
  const auto p2 = ExponentField::from_spec(g2, "sin:0.4,0.2,1.5");
  CHECK(estimate_log_holder_constants(p2).c_local == doctest::Approx(c_local_brute(p2)).epsilon(1e-12));
}

TEST_CASE("log-Holder estimate is shift invariant and grows under refinement") {
  const Grid g = Grid::make(1, 1, 6, 2);
  const auto p = ExponentField::from_spec(g, "sin:0.5,0.1,1");
  CHECK(estimate_log_holder_constants(p.plus(3.0)).c_local ==
        doctest::Approx(estimate_log_holder_constants(p).c_local).epsilon(1e-13));
  // Dyadic values: the shifted field is exact, so is the constant.
  const auto d = ExponentField::from_spec(g, "step:0.5,0.25,0.3");
  CHECK(estimate_log_holder_constants(d.plus(3.0)).c_local == estimate_log_holder_constants(d).c_local);
  double prev = 0.0;
  for (int L : {4, 5, 6, 7, 8}) {
    const Grid gl = Grid::make(1, 1, L, 2);
    const double c = estimate_log_holder_constants(ExponentField::from_spec(gl, "step:0.5,0.25,0.1")).c_local;
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("explicit points overload") {
  const std::array<std::array<double, 2>, 3> pts{{{0.0, 0.0}, {0.5, 0.0}, {2.0, 0.0}}};
  const std::array<double, 3> vals{1.0, 1.5, 1.0};
  const auto est = estimate_log_holder_constants(pts, vals, 1, 1.0);
  const double expect = 0.5 * std::log(std::numbers::e + 2.0);
  CHECK(est.c_local == doctest::Approx(std::max(expect, 0.5 * std::log(std::numbers::e + 1.0 / 1.5))));
  REQUIRE(est.c_decay);
  CHECK(*est.c_decay == doctest::Approx(0.5 * std::log(std::numbers::e + 0.5)));
  const std::array<std::array<double, 2>, 1> one{{{0.0, 0.0}}};
  const std::array<double, 1> v1{1.0};
  CHECK_THROWS_AS(estimate_log_holder_constants(one, v1, 1), DegenerateInputError);
}

TEST_CASE("conjugate exponent is an involution") {
  const Grid g = Grid::make(1, 1, 6, 2);
  const auto p = ExponentField::from_spec(g, "sin:2.5,1,0.7");
  const auto pc = conjugate_exponent(p);
  const auto back = conjugate_exponent(pc);
  for (std::size_t c = 0; c < p.size(); ++c) {
    CHECK(1.0 / p[c] + 1.0 / pc[c] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(back[c] == doctest::Approx(p[c]).epsilon(1e-14));
  }
  const auto one = conjugate_exponent(ExponentField::constant(g, 1.0));
  CHECK(one.all_infinite());
  CHECK(conjugate_exponent(one)[0] == 1.0);
  CHECK_THROWS_AS(conjugate_exponent(ExponentField::constant(g, 0.8)), ClassViolation);
}

TEST_CASE("arithmetic on the infinite sentinel is rejected") {
  const Grid g = Grid::make(1, 0, 3, 1);
  const auto inf = ExponentField::from_spec(g, "inf");
  CHECK_THROWS_AS(inf.negated(), ClassViolation);
  CHECK_THROWS_AS(inf.plus(1.0), ClassViolation);
  CHECK(inf.reciprocal()[0] == 0.0);
}
