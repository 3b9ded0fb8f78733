#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vtl {

/// Truncated dyadic computational domain.
///
/// The box is [-2^J, 2^J)^n sampled by cells of side 2^-L; dyadic levels run
/// from 0 to V_max with V_max + margin <= L so that every level-V_max cube
/// holds at least 2^(n*margin) cells.  Cells are stored row-major with axis 0
/// slowest.
struct Grid {
  int n = 1;
  int J = 0;
  int L = 2;
  int V_max = 0;
  int margin = 2;

  static Grid make(int n, int J, int L, int V_max, int margin = 2);

  std::size_t cells_per_axis() const noexcept { return std::size_t{1} << (J + L + 1); }
  std::size_t cell_count() const noexcept {
    return n == 1 ? cells_per_axis() : cells_per_axis() * cells_per_axis();
  }
  double cell_side() const noexcept;
  double cell_measure() const noexcept;
  double box_half_width() const noexcept;
  double box_measure() const noexcept;

  std::array<std::size_t, 2> unravel(std::size_t cell) const noexcept;
  std::size_t ravel(std::array<std::size_t, 2> idx) const noexcept;
  std::array<double, 2> cell_center(std::size_t cell) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Q_{v,m} = {x : m_i <= 2^v x_i < m_i + 1}.  Unused components of `m` are 0.
struct DyadicCube {
  int v = 0;
  std::array<std::int64_t, 2> m{0, 0};

  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

struct CubeGeometry {
  std::array<double, 2> corner{0.0, 0.0};
  double side = 1.0;
  double measure = 1.0;
  int level = 0;
};

CubeGeometry cube_geometry(const DyadicCube& cube, int n);

/// |Q| for a cube of level v in dimension n.
double cube_measure(int v, int n) noexcept;

/// Number of level-v cubes per axis meeting the box (v >= -(J+1)).
std::int64_t cubes_per_axis(const Grid& grid, int v) noexcept;

/// True if the cube meets the box.
bool cube_meets_box(const Grid& grid, const DyadicCube& cube) noexcept;

/// Cells whose centres lie in the cube, in increasing index order.  Cubes of
/// negative level are clipped to the box.  Throws PreconditionError for
/// levels above V_max or cubes outside the box.
std::vector<std::size_t> cells_in_cube(const Grid& grid, const DyadicCube& cube);

/// All cubes with 0 <= v <= V_max meeting the box, v ascending then m
/// lexicographic.
std::vector<DyadicCube> unit_or_smaller_cubes(const Grid& grid);

/// Cubes with 1 < |P| <= 2^(n(J+1)) meeting the box (levels -(J+1)..-1).
std::vector<DyadicCube> large_cubes(const Grid& grid);

/// The level-v cube (v in [0, L]) containing a cell.
DyadicCube containing_cube(const Grid& grid, int v, std::size_t cell) noexcept;

/// Dense index of a level-v cube (v >= 0) among the cubes of that level,
/// row-major in m.  Consistent with containing_cube and unit_or_smaller_cubes.
std::size_t cube_slot(const Grid& grid, const DyadicCube& cube) noexcept;
std::size_t cube_slot_of_cell(const Grid& grid, int v, std::size_t cell) noexcept;
DyadicCube cube_from_slot(const Grid& grid, int v, std::size_t slot) noexcept;
std::size_t cubes_at_level(const Grid& grid, int v) noexcept;

/// Per-level cell masks describing measurable subsets E_Q of each cube Q.
/// Because the level-v cubes partition the cells, one mask per level carries
/// the subsets of all cubes at that level.
struct CubeSubsets {
  Grid grid;
  std::vector<std::vector<std::uint8_t>> masks;  // [v][cell]

  static CubeSubsets full(const Grid& grid);
  bool contains(int v, std::size_t cell) const noexcept { return masks[v][cell] != 0; }
  /// |E_Q| for one cube.
  double measure(const DyadicCube& cube) const;
  /// min over cubes of |E_Q| / |Q|.
  double min_fraction() const;
};

std::string to_string(const DyadicCube& cube, int n);

}  // namespace vtl
