#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vtl/error.hpp"
#include "vtl/harness.hpp"
#include "vtl/phi_system.hpp"

using namespace vtl;

TEST_CASE("cutoff and resolution of unity") {
  CHECK(cutoff(0.0) == 1.0);
  CHECK(cutoff(1.0) == 1.0);
  CHECK(cutoff(2.0) == 0.0);
  CHECK(cutoff(5.0) == 0.0);
  for (double r = 1.0; r < 2.0; r += 0.01) {
    CHECK(cutoff(r) <= 1.0);
    CHECK(cutoff(r + 0.005) <= cutoff(r));
  }
  for (double r = 0.0; r <= 64.0; r += 0.173) {
    double s = 0.0;
    for (int v = 0; v <= 6; ++v) s += partition_weight(v, r);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    double sq = 0.0;
    for (int v = 0; v <= 6; ++v) sq += level_filter(v, r) * level_filter(v, r);
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Supports: F Phi on |xi| <= 2, F phi on 1/2 <= |xi| <= 2.
  CHECK(Phi_hat(2.0) == 0.0);
  CHECK(phi_hat(0.5) == 0.0);
  CHECK(phi_hat(2.0) == 0.0);
  CHECK(phi_hat(1.0) > 0.0);
}

TEST_CASE("certificate on desk grids") {
  for (auto [n, J, L, V] : {std::tuple{1, 1, 9, 6}, {2, 0, 6, 3}, {1, 1, 9, 1}}) {
    const auto sys = build_fj_system(n, J, L, V);
    const auto& c = sys.certificate;
    CHECK(c.supports_exact);
    CHECK(c.calderon_residual <= 1e-8);
    CHECK(c.phi0_lower > 0.0);
    CHECK(c.phi_lower > 0.0);
    CHECK(c.d_min >= 1.0 - 1e-12);
    CHECK(c.passes());
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(build_fj_system(1, 1, 4, 3), ResolutionError);
  CHECK_THROWS_AS(build_fj_system(Grid::make(1, 1, 6, 3), 4.0), ResolutionError);
  CHECK_THROWS_AS(build_fj_system(1, 1, 4, 0), PreconditionError);
}

TEST_CASE("analysis of a pure cosine samples the filtered wave at cube corners") {
  const Grid g = Grid::make(1, 1, 9, 6);
  const auto sys = build_fj_system(g);
  const double T = 4.0;
  for (int k : {1, 3, 10, 37}) {
    const double xi = 2.0 * std::numbers::pi * k / T;
    GridFunction f(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) f[c] = std::cos(xi * g.cell_center(c)[0]);
    const auto lam = analyze(f, sys);
    for (int v = 0; v <= g.V_max; ++v) {
      const auto& lv = lam.level(v);
      for (std::size_t s = 0; s < lv.size(); s += 3) {
        const auto Q = cube_from_slot(g, v, s);
        const double x = std::ldexp(static_cast<double>(Q.m[0]), -v);
        const double expect = std::exp2(-0.5 * v) * level_filter(v, xi) * std::cos(xi * x);
        CHECK(std::abs(lv[s] - expect) <= 1e-12);
      }
    }
  }
}

TEST_CASE("reconstruction and Parseval for band-limited functions") {
  for (auto [n, J, L, V] : {std::tuple{1, 1, 9, 6}, {2, 0, 6, 3}}) {
    const Grid g = Grid::make(n, J, L, V);
    const auto sys = build_fj_system(g);
    for (unsigned s = 1; s <= 4; ++s) {
      const auto f = gen_bandlimited(g, s, 0, std::exp2(V - 1));
      const auto h = gen_bandlimited(g, s, 1, std::exp2(V - 1));
      const auto back = synthesize(analyze(f, sys), sys);
      double err = 0.0;
      for (std::size_t c = 0; c < f.size(); ++c) err = std::max(err, std::abs(back[c] - f[c]));
      CHECK(err <= 1e-10);
      const Complex a = inner_product(f, h);
      const Complex b = coefficient_inner_product(analyze(f, sys), analyze(h, sys));
      CHECK(std::abs(a - b) <= 1e-10 * std::sqrt(std::abs(inner_product(f, f) * inner_product(h, h))));
    }
  }
}

TEST_CASE("Littlewood-Paley pieces sum back to a band-limited function") {
  const Grid g = Grid::make(1, 1, 8, 5);
  const auto sys = build_fj_system(g);
  const auto f = gen_bandlimited(g, 3, 0, std::exp2(5));
  const auto fs = lp_decompose(f, sys);
  CHECK(fs.levels.size() == 6);
  GridFunction sum(g, false);
  for (const auto& piece : fs.levels) sum += piece;
  for (std::size_t c = 0; c < g.cell_count(); ++c) CHECK(std::abs(sum[c] - f[c]) <= 1e-12);
}
