#pragma once

#include <complex>
#include <span>
#include <vector>

#include "vtl/grid.hpp"

namespace vtl {

using Complex = std::complex<double>;

/// Cell-sampled function on the box.
class GridFunction {
 public:
  explicit GridFunction(const Grid& grid, bool real = true);
  GridFunction(const Grid& grid, std::vector<Complex> values, bool real = false);
  static GridFunction from_real(const Grid& grid, std::span<const double> values);
  /// Indicator of a cube (clipped to the box).
  static GridFunction indicator(const Grid& grid, const DyadicCube& cube);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool is_real() const noexcept { return real_; }
  void set_real(bool real) noexcept { real_ = real; }

  Complex& operator[](std::size_t cell) noexcept { return values_[cell]; }
  const Complex& operator[](std::size_t cell) const noexcept { return values_[cell]; }
  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }

  std::vector<double> magnitudes() const;
  bool all_finite() const noexcept;
  bool is_zero() const noexcept;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(Complex c) noexcept;

 private:
  Grid grid_;
  std::vector<Complex> values_;
  bool real_ = true;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(Complex c, GridFunction a);

/// Sequence (f_v) for v = v_start, v_start + 1, ... on one grid.
struct FunctionSequence {
  int v_start = 0;
  std::vector<GridFunction> levels;

  const Grid& grid() const { return levels.front().grid(); }
  int v_end() const noexcept { return v_start + static_cast<int>(levels.size()) - 1; }
  FunctionSequence scaled(double c) const;
};

/// Plain quadrature sum over cells times the cell measure.
Complex integrate(const GridFunction& f);

}  // namespace vtl
