#include "vtl/coeff.hpp"

#include <cmath>

#include "vtl/error.hpp"

namespace vtl {

CoeffSequence::CoeffSequence(const Grid& grid) : grid_(grid) {
  for (int v = 0; v <= grid.V_max; ++v) levels_.emplace_back(cubes_at_level(grid, v), Complex{});
}

void CoeffSequence::check_cube(const DyadicCube& cube) const {
  if (cube.v < 0 || cube.v > grid_.V_max || !cube_meets_box(grid_, cube))
    throw InputError("coefficient index " + to_string(cube, grid_.n) + " outside the grid");
}

Complex& CoeffSequence::at(const DyadicCube& cube) {
  check_cube(cube);
  return levels_[static_cast<std::size_t>(cube.v)][cube_slot(grid_, cube)];
}

const Complex& CoeffSequence::at(const DyadicCube& cube) const {
  check_cube(cube);
  return levels_[static_cast<std::size_t>(cube.v)][cube_slot(grid_, cube)];
}

std::size_t CoeffSequence::total_size() const noexcept {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

bool CoeffSequence::is_zero() const noexcept {
  for (const auto& l : levels_)
    for (const Complex& z : l)
      if (z != Complex{}) return false;
  return true;
}

bool CoeffSequence::all_finite() const noexcept {
  for (const auto& l : levels_)
    for (const Complex& z : l)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

CoeffSequence& CoeffSequence::operator+=(const CoeffSequence& other) {
  if (!(other.grid_ == grid_)) throw InputError("coefficient sequences on different grids");
  for (std::size_t v = 0; v < levels_.size(); ++v)
    for (std::size_t i = 0; i < levels_[v].size(); ++i) levels_[v][i] += other.levels_[v][i];
  return *this;
}

CoeffSequence& CoeffSequence::operator*=(Complex c) noexcept {
  for (auto& l : levels_)
    for (Complex& z : l) z *= c;
  return *this;
}

CoeffSequence CoeffSequence::abs() const {
  CoeffSequence out = *this;
  for (auto& l : out.levels_)
    for (Complex& z : l) z = std::abs(z);
  return out;
}

CoeffSequence operator+(CoeffSequence a, const CoeffSequence& b) { return a += b; }
CoeffSequence operator*(Complex c, CoeffSequence a) { return a *= c; }

}  // namespace vtl
