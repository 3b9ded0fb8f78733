#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vtl/error.hpp"
#include "vtl/harness.hpp"
#include "vtl/sequence.hpp"

using namespace vtl;

TEST_CASE("stack places 2^{v(alpha + n/2)} lambda on each cube") {
  const Grid g = Grid::make(2, 0, 4, 2);
  const auto alpha = ExponentField::from_spec(g, "sin:0.3,0.2,1");
  const auto lam = gen_coeffs(g, 4, 0.5);
  const auto fs = stack(lam, alpha);
  for (int v = 0; v <= 2; ++v)
    for (std::size_t c = 0; c < g.cell_count(); c += 5) {
      const Complex expect = std::exp2(v * (alpha[c] + 1.0)) * lam.at(containing_cube(g, v, c));
      CHECK(std::abs(fs.levels[static_cast<std::size_t>(v)][c] - expect) <= 1e-14 * std::abs(expect));
    }
}

TEST_CASE("single coefficient: closed forms") {
  const Grid g = Grid::make(1, 1, 8, 4);
  const auto zero = ExponentField::constant(g, 0.0);
  const auto two = ExponentField::constant(g, 2.0);
  for (int v : {0, 2, 4}) {
    CoeffSequence lam(g);
    lam.at(DyadicCube{v, {1, 0}}) = Complex(0.0, -3.0);
    // The cube itself attains 2^{v/2}|lambda|; ancestors give 2^{u/2}|lambda|.
    CHECK(norm_btilde(lam, zero, two, two).value == doctest::Approx(std::exp2(0.5 * v) * 3.0).epsilon(1e-9));
    CHECK(norm_f(lam, zero, two) == doctest::Approx(std::exp2(-0.5 * v) * 3.0).epsilon(1e-12));
  }
  CHECK(norm_btilde(CoeffSequence(g), zero, two, two).value == 0.0);
}

TEST_CASE("constant exponents: library against the direct localized sum") {
  const Grid g = Grid::make(1, 0, 5, 3);
  for (auto [a, p, q] : {std::tuple{0.0, 2.0, 2.0}, {0.5, 1.5, 3.0}, {-0.3, 3.0, 1.2}}) {
    const auto A = ExponentField::constant(g, a), P = ExponentField::constant(g, p), Q = ExponentField::constant(g, q);
    for (unsigned s = 1; s <= 4; ++s) {
      const auto lam = gen_coeffs(g, s, 0.3);
      CHECK(norm_btilde(lam, A, P, Q).value == doctest::Approx(oracle::btilde_const(lam, a, p, q)).epsilon(1e-9));
      const auto E = random_subsets(g, 0.5, s, 2);
      CHECK(norm_btilde_subset(lam, A, P, Q, E, 0.5).value ==
            doctest::Approx(oracle::btilde_const(lam, a, p, q, E.masks)).epsilon(1e-9));
    }
  }
}

TEST_CASE("f-norm against the direct pointwise sum") {
  const Grid g = Grid::make(1, 1, 6, 3);
  const auto alpha = ExponentField::from_spec(g, "sin:0.2,0.3,1");
  const auto q = ExponentField::from_spec(g, "sin:2,0.5,0.5");
  const auto lam = gen_coeffs(g, 8, 0.2);
  double s = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    double t = 0.0;
    for (int v = 0; v <= g.V_max; ++v)
      t += std::pow(std::exp2(v * (alpha[c] + 0.5)) * std::abs(lam.at(containing_cube(g, v, c))), q[c]);
    s += std::pow(t, 1.0 / q[c]) * g.cell_measure();
  }
  CHECK(norm_f(lam, alpha, q) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("p = q: both evaluation paths of the b-tilde norm agree") {
  const Grid g = Grid::make(1, 1, 7, 4);
  const auto alpha = ExponentField::from_spec(g, "sin:0,0.3,1");
  const auto q = ExponentField::from_spec(g, "sin:2,0.6,0.5");
  for (unsigned s = 1; s <= 5; ++s) {
    const auto lam = gen_coeffs(g, s, 0.5);
    const double a = norm_btilde(lam, alpha, q, q, CubeFamily::unit_or_smaller, MixedPath::lq_Lp).value;
    const double b = norm_btilde(lam, alpha, q, q, CubeFamily::unit_or_smaller, MixedPath::Lp_lq).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
  const auto p = ExponentField::from_spec(g, "sin:3,0.6,0.5");
  CHECK_THROWS_AS(norm_btilde(gen_coeffs(g, 1, 0.5), alpha, p, q, CubeFamily::unit_or_smaller, MixedPath::Lp_lq),
                  PreconditionError);
}

TEST_CASE("larger cube family can only increase the norm") {
  const Grid g = Grid::make(1, 1, 6, 3);
  const auto alpha = ExponentField::constant(g, 0.0);
  const auto p = ExponentField::from_spec(g, "sin:2,0.4,0.5");
  const auto lam = gen_coeffs(g, 2, 0.5);
  CHECK(norm_btilde(lam, alpha, p, p, CubeFamily::all).value >= norm_btilde(lam, alpha, p, p).value);
}

TEST_CASE("subset norms need |E_Q| > eps |Q|") {
  const Grid g = Grid::make(1, 0, 4, 2);
  const auto one = ExponentField::constant(g, 2.0);
  const auto zero = ExponentField::constant(g, 0.0);
  auto E = CubeSubsets::full(g);
  for (std::size_t c = 0; c < g.cell_count(); ++c) E.masks[0][c] = c % 2;
  CHECK_THROWS_AS(norm_btilde_subset(gen_coeffs(g, 1, 0.5), zero, one, one, E, 0.5), PreconditionError);
  CHECK_NOTHROW(norm_btilde_subset(gen_coeffs(g, 1, 0.5), zero, one, one, E, 0.4));
}

TEST_CASE("function-space norms are homogeneous and vanish on zero") {
  const Grid g = Grid::make(1, 1, 8, 5);
  const auto sys = build_fj_system(g);
  const auto alpha = ExponentField::from_spec(g, "sin:0.5,0.2,1");
  const auto p = ExponentField::from_spec(g, "sin:2,0.4,0.5");
  const auto f = gen_bandlimited(g, 5, 0, 16.0);
  const double B = norm_B_function(f, alpha, p, p, sys).value;
  const double F = norm_F_function(f, alpha, p, p, sys);
  CHECK(B > 0.0);
  CHECK(norm_B_function(Complex(2.0, 0.0) * f, alpha, p, p, sys).value == doctest::Approx(2.0 * B).epsilon(1e-9));
  CHECK(norm_F_function(Complex(0.0, 3.0) * f, alpha, p, p, sys) == doctest::Approx(3.0 * F).epsilon(1e-9));
  CHECK(norm_F_function(GridFunction(g), alpha, p, p, sys) == 0.0);
}

TEST_CASE("f-norm with q = 1 reduces to a weighted l^1 sum") {
  for (int n : {1, 2}) {
    const Grid g = Grid::make(n, 0, n == 1 ? 6 : 4, 2);
    const double a = 0.4;
    const auto A = ExponentField::constant(g, a), one = ExponentField::constant(g, 1.0);
    const auto lam = gen_coeffs(g, 6, 0.3);
    double s = 0.0;
    for (int v = 0; v <= g.V_max; ++v)
      for (const Complex& z : lam.level(v)) s += std::exp2(v * (a + 0.5 * n) - v * n) * std::abs(z);
    CHECK(norm_f(lam, A, one) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("sequence norms: homogeneous and monotone in |lambda|") {
  const Grid g = Grid::make(1, 1, 6, 3);
  const auto alpha = ExponentField::from_spec(g, "sin:0.2,0.3,1");
  const auto p = ExponentField::from_spec(g, "sin:2.5,0.5,0.5");
  const auto q = ExponentField::from_spec(g, "sin:2,0.4,0.5");
  for (unsigned s = 1; s <= 4; ++s) {
    const auto lam = gen_coeffs(g, s, 0.4);
    auto big = lam;
    big *= Complex(0.0, -2.5);
    CHECK(norm_btilde(big, alpha, p, q).value == doctest::Approx(2.5 * norm_btilde(lam, alpha, p, q).value).epsilon(1e-8));
    CHECK(norm_f(big, alpha, q) == doctest::Approx(2.5 * norm_f(lam, alpha, q)).epsilon(1e-12));
    // shrink a random subset of entries
    auto small = lam;
    const auto mask = gen_coeffs(g, s + 100, 0.0, 0, 0.5);
    for (int v = 0; v <= g.V_max; ++v)
      for (std::size_t k = 0; k < small.level(v).size(); ++k)
        if (mask.level(v)[k] != Complex(0.0)) small.level(v)[k] *= 0.3;
    CHECK(norm_btilde(small, alpha, p, q).value <= norm_btilde(lam, alpha, p, q).value * (1.0 + 1e-9));
    CHECK(norm_f(small, alpha, q) <= norm_f(lam, alpha, q));
  }
}

TEST_CASE("J = 0, constant exponents: cube families agree exactly") {
  const Grid g = Grid::make(1, 0, 6, 3);
  const auto A = ExponentField::constant(g, 0.3), P = ExponentField::constant(g, 2.0), Q = ExponentField::constant(g, 3.0);
  const auto sys = build_fj_system(g);
  const auto f = gen_bandlimited(g, 2, 0, 8.0);
  CHECK(norm_B_function(f, A, P, Q, sys, CubeFamily::all).value ==
        doctest::Approx(norm_B_function(f, A, P, Q, sys).value).epsilon(1e-9));
}

TEST_CASE("F-norm with alpha = 0, p = q = 2 is the l^2 sum of band energies") {
  const Grid g = Grid::make(1, 1, 8, 5);
  const auto sys = build_fj_system(g);
  const auto zero = ExponentField::constant(g, 0.0), two = ExponentField::constant(g, 2.0);
  const auto f = gen_bandlimited(g, 4, 0, 24.0);
  const auto lev = lp_decompose(f, sys);
  double e = 0.0;
  for (const auto& fv : lev.levels)
    for (std::size_t c = 0; c < g.cell_count(); ++c) e += std::norm(fv[c]) * g.cell_measure();
  CHECK(norm_F_function(f, zero, two, two, sys) == doctest::Approx(std::sqrt(e)).epsilon(1e-8));
}

TEST_CASE("B-norm with constant exponents matches the direct sup over cubes") {
  const Grid g = Grid::make(1, 0, 7, 4);
  const auto sys = build_fj_system(g);
  const double a = 0.5, p = 1.5, q = 2.5;
  const auto f = gen_bandlimited(g, 6, 0, 12.0);
  const auto lev = lp_decompose(f, sys);
  double best = 0.0;
  for (const auto& P : unit_or_smaller_cubes(g)) {
    double s = 0.0;
    for (int v = P.v; v <= g.V_max; ++v) {
      double I = 0.0;
      for (std::size_t c : cells_in_cube(g, P)) I += std::pow(std::abs(lev.levels[static_cast<std::size_t>(v)][c]), p) * g.cell_measure();
      s += std::pow(std::exp2(v * a) * std::pow(I / cube_measure(P.v, 1), 1.0 / p), q);
    }
    best = std::max(best, std::pow(s, 1.0 / q));
  }
  const auto A = ExponentField::constant(g, a), Pf = ExponentField::constant(g, p), Qf = ExponentField::constant(g, q);
  CHECK(norm_B_function(f, A, Pf, Qf, sys).value == doctest::Approx(best).epsilon(1e-8));
}
