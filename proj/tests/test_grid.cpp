#include <doctest.h>

#include <cmath>
#include <set>

#include "vtl/error.hpp"
#include "vtl/grid.hpp"

using namespace vtl;

TEST_CASE("grid sizes and cell centres") {
  const Grid g = Grid::make(1, 1, 9, 6);
  CHECK(g.cells_per_axis() == 2048);
  CHECK(g.cell_side() == std::ldexp(1.0, -9));
  CHECK(g.cell_center(0)[0] == doctest::Approx(-2.0 + 0.5 * std::ldexp(1.0, -9)).epsilon(1e-15));
  CHECK(g.cell_center(2047)[0] == doctest::Approx(2.0 - 0.5 * std::ldexp(1.0, -9)).epsilon(1e-15));

  const Grid g2 = Grid::make(2, 0, 6, 3);
  CHECK(g2.cell_count() == 128u * 128u);
  for (std::size_t c : {0ul, 17ul, 5000ul, 16383ul}) CHECK(g2.ravel(g2.unravel(c)) == c);
  const auto x = g2.cell_center(g2.ravel({3, 5}));
  CHECK(x[0] == doctest::Approx(-1.0 + 3.5 / 64.0));
  CHECK(x[1] == doctest::Approx(-1.0 + 5.5 / 64.0));
}

TEST_CASE("grid rejects an unresolvable finest level") {
  CHECK_THROWS_AS(Grid::make(1, 1, 7, 6), InputError);
  CHECK_THROWS_AS(Grid::make(3, 0, 4, 1), InputError);
  CHECK_NOTHROW(Grid::make(1, 0, 3, 1));
}

TEST_CASE("cubes of level v hold 2^{n(L-v)} cells and partition the box") {
  for (int n : {1, 2}) {
    const Grid g = Grid::make(n, 0, 5, 3);
    const auto cubes = unit_or_smaller_cubes(g);
    std::size_t expected = 0;
    for (int v = 0; v <= g.V_max; ++v) expected += static_cast<std::size_t>(std::pow(std::pow(2.0, v + 1), n));
    CHECK(cubes.size() == expected);
    for (int v = 0; v <= g.V_max; ++v) {
      std::set<std::size_t> seen;
      for (const auto& Q : cubes) {
        if (Q.v != v) continue;
        const auto cells = cells_in_cube(g, Q);
        CHECK(cells.size() == static_cast<std::size_t>(std::pow(2.0, n * (g.L - v))));
        for (std::size_t c : cells) {
          CHECK(seen.insert(c).second);
          CHECK(containing_cube(g, v, c) == Q);
          CHECK(cube_slot_of_cell(g, v, c) == cube_slot(g, Q));
        }
        CHECK(cube_from_slot(g, v, cube_slot(g, Q)) == Q);
      }
      CHECK(seen.size() == g.cell_count());
    }
  }
}

TEST_CASE("cell centres lie in their containing cube") {
  const Grid g = Grid::make(1, 1, 6, 3);
  for (std::size_t c = 0; c < g.cell_count(); c += 7)
    for (int v = 0; v <= 3; ++v) {
      const auto Q = containing_cube(g, v, c);
      const double x = g.cell_center(c)[0] * std::ldexp(1.0, v);
      CHECK(static_cast<double>(Q.m[0]) <= x);
      CHECK(x < static_cast<double>(Q.m[0]) + 1.0);
    }
}

TEST_CASE("large cubes keep their measure but are clipped") {
  const Grid g = Grid::make(1, 1, 4, 2);
  const auto big = large_cubes(g);
  REQUIRE_FALSE(big.empty());
  for (const auto& Q : big) {
    CHECK(Q.v < 0);
    CHECK(cube_measure(Q.v, 1) == std::ldexp(1.0, -Q.v));
    CHECK(cells_in_cube(g, Q).size() <= g.cell_count());
  }
  CHECK_THROWS_AS(cells_in_cube(g, DyadicCube{3, {0, 0}}), PreconditionError);
}

TEST_CASE("full subsets have fraction one") {
  const Grid g = Grid::make(1, 0, 4, 2);
  auto E = CubeSubsets::full(g);
  CHECK(E.min_fraction() == 1.0);
  E.masks[2][0] = 0;
  CHECK(E.min_fraction() == doctest::Approx(0.75));
  CHECK(E.measure(DyadicCube{2, {-4, 0}}) == doctest::Approx(3.0 / 16.0));
}
