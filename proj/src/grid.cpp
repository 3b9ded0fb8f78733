#include "vtl/grid.hpp"

#include <cmath>
#include <sstream>

#include "vtl/error.hpp"

namespace vtl {

namespace {

std::int64_t floor_div_pow2(std::int64_t a, int shift) {
  // floor(a / 2^shift) for shift >= 0
  return a >= 0 ? (a >> shift) : -((-a + (std::int64_t{1} << shift) - 1) >> shift);
}

// First and one-past-last m along an axis for cubes of level v meeting [-2^J, 2^J).
std::pair<std::int64_t, std::int64_t> m_range(const Grid& g, int v) {
  const int e = g.J + v;
  if (e >= 0) {
    const std::int64_t k = std::int64_t{1} << e;
    return {-k, k};
  }
  // 2^e < 1: the box spans the cubes m = -1 and m = 0 only.
  return {-1, 1};
}

}  // namespace

Grid Grid::make(int n, int J, int L, int V_max, int margin) {
  if (n != 1 && n != 2) throw InputError("grid: dimension must be 1 or 2");
  if (J < 0) throw InputError("grid: J must be >= 0");
  if (V_max < 0) throw InputError("grid: V_max must be >= 0");
  if (margin < 2) throw InputError("grid: oversampling margin must be >= 2");
  if (L < V_max + margin)
    throw InputError("grid: need V_max + margin <= L (V_max=" + std::to_string(V_max) +
                     ", L=" + std::to_string(L) + ")");
  const int bits = n * (J + L + 1);
  if (bits > 26) throw InputError("grid: too many cells (2^" + std::to_string(bits) + ")");
  return Grid{n, J, L, V_max, margin};
}

double Grid::cell_side() const noexcept { return std::ldexp(1.0, -L); }
double Grid::cell_measure() const noexcept { return std::ldexp(1.0, -n * L); }
double Grid::box_half_width() const noexcept { return std::ldexp(1.0, J); }
double Grid::box_measure() const noexcept { return std::ldexp(1.0, n * (J + 1)); }

std::array<std::size_t, 2> Grid::unravel(std::size_t cell) const noexcept {
  if (n == 1) return {cell, 0};
  const std::size_t m = cells_per_axis();
  return {cell / m, cell % m};
}

std::size_t Grid::ravel(std::array<std::size_t, 2> idx) const noexcept {
  if (n == 1) return idx[0];
  return idx[0] * cells_per_axis() + idx[1];
}

std::array<double, 2> Grid::cell_center(std::size_t cell) const noexcept {
  const auto idx = unravel(cell);
  const double h = cell_side();
  const double x0 = -box_half_width();
  std::array<double, 2> c{x0 + (static_cast<double>(idx[0]) + 0.5) * h, 0.0};
  if (n == 2) c[1] = x0 + (static_cast<double>(idx[1]) + 0.5) * h;
  return c;
}

double cube_measure(int v, int n) noexcept { return std::ldexp(1.0, -v * n); }

CubeGeometry cube_geometry(const DyadicCube& cube, int n) {
  CubeGeometry g;
  g.side = std::ldexp(1.0, -cube.v);
  g.measure = cube_measure(cube.v, n);
  g.level = cube.v;
  for (int i = 0; i < n; ++i) g.corner[i] = std::ldexp(static_cast<double>(cube.m[i]), -cube.v);
  return g;
}

std::int64_t cubes_per_axis(const Grid& grid, int v) noexcept {
  const auto [a, b] = m_range(grid, v);
  return b - a;
}

bool cube_meets_box(const Grid& grid, const DyadicCube& cube) noexcept {
  const auto [a, b] = m_range(grid, cube.v);
  for (int i = 0; i < grid.n; ++i)
    if (cube.m[i] < a || cube.m[i] >= b) return false;
  for (int i = grid.n; i < 2; ++i)
    if (cube.m[i] != 0) return false;
  return true;
}

std::vector<std::size_t> cells_in_cube(const Grid& grid, const DyadicCube& cube) {
  if (cube.v > grid.V_max)
    throw PreconditionError("cells_in_cube: level " + std::to_string(cube.v) + " exceeds V_max");
  if (!cube_meets_box(grid, cube))
    throw PreconditionError("cells_in_cube: cube " + to_string(cube, grid.n) +
                            " does not meet the box");
  const std::int64_t M = static_cast<std::int64_t>(grid.cells_per_axis());
  const std::int64_t offset = std::int64_t{1} << (grid.J + grid.L);
  std::array<std::int64_t, 2> lo{0, 0}, hi{1, 1};
  for (int i = 0; i < grid.n; ++i) {
    const int s = grid.L - cube.v;  // log2 cells per cube side
    const std::int64_t start = cube.m[i] * (std::int64_t{1} << s) + offset;
    lo[i] = std::max<std::int64_t>(start, 0);
    hi[i] = std::min<std::int64_t>(start + (std::int64_t{1} << s), M);
  }
  std::vector<std::size_t> cells;
  cells.reserve(static_cast<std::size_t>((hi[0] - lo[0]) * (hi[1] - lo[1])));
  for (std::int64_t a = lo[0]; a < hi[0]; ++a)
    for (std::int64_t b = lo[1]; b < hi[1]; ++b)
      cells.push_back(grid.ravel({static_cast<std::size_t>(a), static_cast<std::size_t>(b)}));
  if (cells.empty()) throw PreconditionError("cells_in_cube: empty cell set");
  return cells;
}

std::size_t cubes_at_level(const Grid& grid, int v) noexcept {
  const auto k = static_cast<std::size_t>(cubes_per_axis(grid, v));
  return grid.n == 1 ? k : k * k;
}

std::size_t cube_slot(const Grid& grid, const DyadicCube& cube) noexcept {
  const auto [a, b] = m_range(grid, cube.v);
  const auto k = static_cast<std::size_t>(b - a);
  const auto o0 = static_cast<std::size_t>(cube.m[0] - a);
  if (grid.n == 1) return o0;
  return o0 * k + static_cast<std::size_t>(cube.m[1] - a);
}

DyadicCube cube_from_slot(const Grid& grid, int v, std::size_t slot) noexcept {
  const auto [a, b] = m_range(grid, v);
  const auto k = static_cast<std::size_t>(b - a);
  DyadicCube c{v, {0, 0}};
  if (grid.n == 1) {
    c.m[0] = a + static_cast<std::int64_t>(slot);
  } else {
    c.m[0] = a + static_cast<std::int64_t>(slot / k);
    c.m[1] = a + static_cast<std::int64_t>(slot % k);
  }
  return c;
}

std::size_t cube_slot_of_cell(const Grid& grid, int v, std::size_t cell) noexcept {
  const int s = grid.L - v;
  const auto idx = grid.unravel(cell);
  if (grid.n == 1) return idx[0] >> s;
  const std::size_t k = grid.cells_per_axis() >> s;
  return (idx[0] >> s) * k + (idx[1] >> s);
}

DyadicCube containing_cube(const Grid& grid, int v, std::size_t cell) noexcept {
  const auto idx = grid.unravel(cell);
  const std::int64_t offset = std::int64_t{1} << (grid.J + grid.L);
  DyadicCube c{v, {0, 0}};
  for (int i = 0; i < grid.n; ++i)
    c.m[i] = floor_div_pow2(static_cast<std::int64_t>(idx[i]) - offset, grid.L - v);
  return c;
}

std::vector<DyadicCube> unit_or_smaller_cubes(const Grid& grid) {
  std::vector<DyadicCube> out;
  for (int v = 0; v <= grid.V_max; ++v) {
    const std::size_t count = cubes_at_level(grid, v);
    for (std::size_t s = 0; s < count; ++s) out.push_back(cube_from_slot(grid, v, s));
  }
  return out;
}

std::vector<DyadicCube> large_cubes(const Grid& grid) {
  std::vector<DyadicCube> out;
  for (int v = -(grid.J + 1); v <= -1; ++v) {
    const std::size_t count = cubes_at_level(grid, v);
    for (std::size_t s = 0; s < count; ++s) out.push_back(cube_from_slot(grid, v, s));
  }
  return out;
}

CubeSubsets CubeSubsets::full(const Grid& grid) {
  CubeSubsets e{grid, {}};
  e.masks.assign(static_cast<std::size_t>(grid.V_max + 1),
                 std::vector<std::uint8_t>(grid.cell_count(), 1));
  return e;
}

double CubeSubsets::measure(const DyadicCube& cube) const {
  std::size_t count = 0;
  for (std::size_t c : cells_in_cube(grid, cube)) count += masks[cube.v][c] != 0;
  return static_cast<double>(count) * grid.cell_measure();
}

double CubeSubsets::min_fraction() const {
  double worst = 1.0;
  for (int v = 0; v <= grid.V_max; ++v) {
    const std::size_t count = cubes_at_level(grid, v);
    std::vector<std::size_t> hits(count, 0), total(count, 0);
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      const std::size_t s = cube_slot_of_cell(grid, v, c);
      ++total[s];
      hits[s] += masks[v][c] != 0;
    }
    for (std::size_t s = 0; s < count; ++s)
      worst = std::min(worst, static_cast<double>(hits[s]) / static_cast<double>(total[s]));
  }
  return worst;
}

std::string to_string(const DyadicCube& cube, int n) {
  std::ostringstream os;
  os << cube.v << ' ' << cube.m[0];
  if (n == 2) os << ' ' << cube.m[1];
  return os.str();
}

}  // namespace vtl
