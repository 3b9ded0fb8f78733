#pragma once

#include <vector>

#include "vtl/grid_function.hpp"

namespace vtl {

/// lambda_{v,m} for v = 0..V_max and every cube of level v meeting the box,
/// stored per level in cube_slot order.
class CoeffSequence {
 public:
  explicit CoeffSequence(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int max_level() const noexcept { return grid_.V_max; }

  std::vector<Complex>& level(int v) { return levels_.at(static_cast<std::size_t>(v)); }
  const std::vector<Complex>& level(int v) const { return levels_.at(static_cast<std::size_t>(v)); }

  Complex& at(const DyadicCube& cube);
  const Complex& at(const DyadicCube& cube) const;

  std::size_t total_size() const noexcept;
  bool is_zero() const noexcept;
  bool all_finite() const noexcept;

  CoeffSequence& operator+=(const CoeffSequence& other);
  CoeffSequence& operator*=(Complex c) noexcept;
  /// Entrywise |lambda|.
  CoeffSequence abs() const;

  friend bool operator==(const CoeffSequence&, const CoeffSequence&) = default;

 private:
  void check_cube(const DyadicCube& cube) const;
  Grid grid_;
  std::vector<std::vector<Complex>> levels_;
};

CoeffSequence operator+(CoeffSequence a, const CoeffSequence& b);
CoeffSequence operator*(Complex c, CoeffSequence a);

}  // namespace vtl
