#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace vtl {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kInfinity = HUGE_VAL;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// log(sum_i exp(x_i)); -inf for an empty span.
double log_sum_exp(std::span<const double> xs);

struct Bracket {
  double lo;  // f(lo) > 0
  double hi;  // f(hi) <= 0
  int evaluations;
};

/// Smallest t (to within `tol`) with f(t) <= 0 for a non-increasing f.
///
/// The bracket is grown geometrically from `guess` and then narrowed by
/// Illinois regula falsi with a bisection fallback.  The returned `hi` always
/// satisfies f(hi) <= 0 and hi - lo <= tol.
Bracket solve_decreasing(const std::function<double(double)>& f, double guess,
                         double step, double tol);

struct ValueSlope {
  double value;
  double slope;
};

/// Root of a convex, strictly decreasing f given with its derivative.
///
/// Newton iterates approach the root from the left; the result has the same
/// contract as solve_decreasing.  Falls back to solve_decreasing when the
/// derivative is unusable.
Bracket solve_convex_decreasing(const std::function<ValueSlope(double)>& f, double guess,
                                double tol);

/// Seeded generator with platform-independent draws: the engine is
/// std::mt19937_64 and the conversions to doubles are done here, so identical
/// (seed, stream) pairs give bit-identical sequences everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  std::uint64_t next() noexcept { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, no caching).
  double normal() noexcept;
  std::size_t index(std::size_t n) noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace vtl
