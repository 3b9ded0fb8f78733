#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vtl/error.hpp"
#include "vtl/lebesgue.hpp"
#include "vtl/mixed.hpp"

using namespace vtl;

namespace {

FunctionSequence random_seq(const Grid& g, unsigned seed, int levels = 4) {
  Rng rng(seed, 3);
  FunctionSequence fs;
  for (int v = 0; v < levels; ++v) {
    std::vector<Complex> vals(g.cell_count());
    for (auto& z : vals) z = Complex(rng.normal(), rng.normal()) * std::exp2(-0.5 * v);
    fs.levels.emplace_back(g, std::move(vals));
  }
  return fs;
}

double lp_const(const GridFunction& f, double p, const std::vector<std::size_t>* cells = nullptr,
                double scale = 1.0) {
  long double s = 0.0L;
  if (cells)
    for (std::size_t c : *cells) s += std::pow(static_cast<long double>(std::abs(f[c])), p);
  else
    for (const auto& z : f.values()) s += std::pow(static_cast<long double>(std::abs(z)), p);
  return static_cast<double>(std::pow(s * f.grid().cell_measure() / scale, 1.0L / p));
}

}  // namespace

TEST_CASE("constant exponents: both mixed norms in closed form") {
  const Grid g = Grid::make(1, 1, 7, 4);
  for (auto [p, q] : {std::pair{2.0, 2.0}, {1.5, 3.0}, {4.0, 1.2}, {3.0, 0.7}}) {
    const auto P = ExponentField::constant(g, p), Q = ExponentField::constant(g, q);
    const auto fs = random_seq(g, 5);
    double s = 0.0;
    for (const auto& f : fs.levels) s += std::pow(lp_const(f, p), q);
    CHECK(norm_lq_Lp(fs, P, Q) == doctest::Approx(std::pow(s, 1.0 / q)).epsilon(1e-9));
    std::vector<Complex> agg(g.cell_count());
    for (std::size_t c = 0; c < agg.size(); ++c) {
      double t = 0.0;
      for (const auto& f : fs.levels) t += std::pow(std::abs(f[c]), q);
      agg[c] = std::pow(t, 1.0 / q);
    }
    CHECK(norm_Lp_lq(fs, P, Q) == doctest::Approx(lp_const(GridFunction(g, agg), p)).epsilon(1e-9));
  }
}

TEST_CASE("mixed modular: infimum form equals the simplified form") {
  const Grid g = Grid::make(1, 1, 7, 4);
  for (unsigned s = 1; s <= 10; ++s) {
    const auto p = ExponentField::from_spec(g, "sin:2,0.7,0.6");
    const auto q = ExponentField::from_spec(g, "sin:1.5,0.8,1.3");
    const auto fs = random_seq(g, s);
    CHECK(mixed_modular_inf(fs, p, q) == doctest::Approx(mixed_modular_simplified(fs, p, q)).epsilon(1e-9));
  }
}

TEST_CASE("p = q: l^q(L^q) and L^q(l^q) coincide") {
  const Grid g = Grid::make(2, 0, 5, 2);
  const auto p = ExponentField::from_spec(g, "sin:2.2,0.9,0.8");
  for (unsigned s = 1; s <= 5; ++s) {
    const auto fs = random_seq(g, s);
    CHECK(norm_lq_Lp(fs, p, p) == doctest::Approx(norm_Lp_lq(fs, p, p)).epsilon(1e-9));
  }
}

TEST_CASE("triangle inequality in the three normable regimes") {
  const Grid g = Grid::make(1, 1, 6, 3);
  struct Case {
    const char* p;
    const char* q;
  };
  // q constant >= 1 with p >= 1; 1/p + 1/q <= 1; 1 <= q <= p.
  for (Case c : {Case{"sin:1.5,0.4,1", "const:1.5"}, Case{"sin:3,0.5,1", "sin:2.5,0.4,0.6"},
                 Case{"sin:3,0.5,1", "sin:1.6,0.3,0.8"}}) {
    const auto p = ExponentField::from_spec(g, c.p), q = ExponentField::from_spec(g, c.q);
    for (unsigned s = 1; s <= 8; ++s) {
      const auto a = random_seq(g, s), b = random_seq(g, s + 40);
      FunctionSequence sum = a;
      for (std::size_t v = 0; v < sum.levels.size(); ++v) sum.levels[v] += b.levels[v];
      CHECK(norm_lq_Lp(sum, p, q) <= (norm_lq_Lp(a, p, q) + norm_lq_Lp(b, p, q)) * (1 + 1e-8));
    }
  }
}

TEST_CASE("L^p(l^infinity) is the pointwise sup") {
  const Grid g = Grid::make(1, 0, 5, 2);
  const auto fs = random_seq(g, 9);
  const auto agg = lq_aggregate(fs, ExponentField::from_spec(g, "inf"));
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    double m = 0.0;
    for (const auto& f : fs.levels) m = std::max(m, std::abs(f[c]));
    CHECK(agg[c].real() == m);
  }
}

TEST_CASE("localized terms against the per-cube closed form") {
  const Grid g = Grid::make(1, 1, 6, 3);
  const double p = 2.5, q = 1.5;
  const auto P = ExponentField::constant(g, p), Q = ExponentField::constant(g, q);
  const auto fs = random_seq(g, 2);
  double best = 0.0;
  const auto cubes = unit_or_smaller_cubes(g);
  for (const auto& B : cubes) {
    const auto cells = cells_in_cube(g, B);
    double s = 0.0;
    for (int v = B.v; v <= fs.v_end(); ++v)
      s += std::pow(lp_const(fs.levels[static_cast<std::size_t>(v)], p, &cells, cube_measure(B.v, 1)), q);
    const double expect = std::pow(s, 1.0 / q);
    CHECK(localized_term(fs, P, Q, B) == doctest::Approx(expect).epsilon(1e-9));
    best = std::max(best, expect);
  }
  CHECK(localized_norm_lq_Lpp(fs, P, Q, cubes).value == doctest::Approx(best).epsilon(1e-9));
  CHECK_THROWS_AS(localized_norm_lq_Lpp(fs, P, Q, {}), PreconditionError);
}

TEST_CASE("eta kernel masses") {
  CHECK(eta_mass(1, 3.0) == doctest::Approx(1.0));
  CHECK(eta_mass(2, 4.0) == doctest::Approx(2.0 * std::numbers::pi / 6.0));
  // One dimension: mass outside the box is (1 + 2^{v+J})^{1-N}.
  CHECK(eta_tail_fraction(1, 1, 2, 3.0) == doctest::Approx(std::pow(9.0, -2.0)));
  CHECK(eta(1, 2, 3.0, 0.0) == 4.0);

  const Grid g = Grid::make(1, 1, 8, 4);
  GridFunction one(g);
  for (std::size_t c = 0; c < g.cell_count(); ++c) one[c] = 1.0;
  const auto r = eta_convolve(one, 3, 3.0);
  for (std::size_t c = 0; c < g.cell_count(); c += 31) CHECK(r.result[c].real() == doctest::Approx(r.kernel_mass));
  CHECK(r.kernel_mass == doctest::Approx(r.continuum_mass).epsilon(0.1));
  CHECK_THROWS_AS(eta_convolve(one, 3, 1.0), PreconditionError);
}

TEST_CASE("mollifier measurement requires certified exponents") {
  const Grid g = Grid::make(1, 1, 6, 3);
  const auto bare = ExponentField(g, std::vector<double>(g.cell_count(), 2.0));
  const auto q = ExponentField::constant(g, 2.0);
  CHECK_THROWS_AS(measure_mollifier_operator_norm(bare, q, 3.0, MollifierLemma::plain, 2, 1), PreconditionError);
  const auto r = measure_mollifier_operator_norm(ExponentField::constant(g, 2.0), q, 3.0, MollifierLemma::plain, 3, 1);
  CHECK(r.level_constant.size() == 4);
  CHECK(r.uniformity >= 1.0);
}
