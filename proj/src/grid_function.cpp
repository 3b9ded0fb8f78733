#include "vtl/grid_function.hpp"

#include <cmath>

#include "vtl/error.hpp"
#include "vtl/numeric.hpp"

namespace vtl {

GridFunction::GridFunction(const Grid& grid, bool real)
    : grid_(grid), values_(grid.cell_count(), Complex{0.0, 0.0}), real_(real) {}

GridFunction::GridFunction(const Grid& grid, std::vector<Complex> values, bool real)
    : grid_(grid), values_(std::move(values)), real_(real) {
  if (values_.size() != grid_.cell_count())
    throw InputError("grid function: expected " + std::to_string(grid_.cell_count()) +
                     " values, got " + std::to_string(values_.size()));
}

GridFunction GridFunction::from_real(const Grid& grid, std::span<const double> values) {
  std::vector<Complex> v(values.begin(), values.end());
  return GridFunction(grid, std::move(v), true);
}

GridFunction GridFunction::indicator(const Grid& grid, const DyadicCube& cube) {
  GridFunction f(grid, true);
  for (std::size_t c : cells_in_cube(grid, cube)) f[c] = 1.0;
  return f;
}

std::vector<double> GridFunction::magnitudes() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(values_[i]);
  return out;
}

bool GridFunction::all_finite() const noexcept {
  for (const Complex& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

bool GridFunction::is_zero() const noexcept {
  for (const Complex& z : values_)
    if (z != Complex{0.0, 0.0}) return false;
  return true;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(other.grid_ == grid_)) throw InputError("grid function: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  real_ = real_ && other.real_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!(other.grid_ == grid_)) throw InputError("grid function: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  real_ = real_ && other.real_;
  return *this;
}

GridFunction& GridFunction::operator*=(Complex c) noexcept {
  for (Complex& z : values_) z *= c;
  if (c.imag() != 0.0) real_ = false;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(Complex c, GridFunction a) { return a *= c; }

FunctionSequence FunctionSequence::scaled(double c) const {
  FunctionSequence out = *this;
  for (GridFunction& f : out.levels) f *= c;
  return out;
}

Complex integrate(const GridFunction& f) {
  CompensatedSum re, im;
  for (const Complex& z : f.values()) {
    re += z.real();
    im += z.imag();
  }
  return Complex{re.value(), im.value()} * f.grid().cell_measure();
}

}  // namespace vtl
