#include "vtl/numeric.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "vtl/error.hpp"

namespace vtl {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

double log_sum_exp(std::span<const double> xs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : xs) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  CompensatedSum s;
  for (double x : xs) s.add(std::exp(x - top));
  return top + std::log(s.value());
}

Bracket solve_decreasing(const std::function<double(double)>& f, double guess,
                         double step, double tol) {
  if (!(step > 0.0) || !std::isfinite(step)) step = 1.0;
  int evals = 0;
  auto eval = [&](double t) {
    ++evals;
    return f(t);
  };

  double lo = 0, hi = 0, flo = 0, fhi = 0;
  const double f0 = eval(guess);
  if (std::isnan(f0)) throw InvariantFailure("solve_decreasing: objective is NaN");
  if (f0 > 0.0) {
    lo = guess;
    flo = f0;
    double s = step;
    for (;;) {
      hi = lo + s;
      fhi = eval(hi);
      if (fhi <= 0.0) break;
      lo = hi;
      flo = fhi;
      s *= 2.0;
      if (evals > 2000) throw InvariantFailure("solve_decreasing: no sign change above guess");
    }
  } else {
    hi = guess;
    fhi = f0;
    double s = step;
    for (;;) {
      lo = hi - s;
      flo = eval(lo);
      if (flo > 0.0) break;
      hi = lo;
      fhi = flo;
      s *= 2.0;
      if (evals > 2000) throw InvariantFailure("solve_decreasing: no sign change below guess");
    }
  }

  // Illinois regula falsi on [lo, hi]; fall back to bisection whenever the
  // interpolant is unusable or the bracket stops shrinking fast enough.
  int side = 0;
  double wlo = flo, whi = fhi;
  while (hi - lo > tol) {
    const double width = hi - lo;
    double t;
    const bool finite = std::isfinite(wlo) && std::isfinite(whi) && wlo != whi;
    if (finite) {
      t = (lo * whi - hi * wlo) / (whi - wlo);
    } else {
      t = 0.5 * (lo + hi);
    }
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    // Stay a little away from the ends so that both sides keep moving.
    const double guard = 0.01 * width;
    if (t - lo < guard) t = lo + std::min(guard, 0.5 * width);
    if (hi - t < guard) t = hi - std::min(guard, 0.5 * width);
    if (width <= 4.0 * tol) t = 0.5 * (lo + hi);

    const double ft = eval(t);
    if (std::isnan(ft)) throw InvariantFailure("solve_decreasing: objective is NaN");
    if (ft > 0.0) {
      lo = t;
      wlo = ft;
      if (side == -1) whi *= 0.5;
      side = -1;
    } else {
      hi = t;
      whi = ft;
      if (side == 1) wlo *= 0.5;
      side = 1;
    }
    if (evals > 5000) throw InvariantFailure("solve_decreasing: no convergence");
  }
  return {lo, hi, evals};
}

Bracket solve_convex_decreasing(const std::function<ValueSlope(double)>& f, double guess,
                                double tol) {
  int evals = 0;
  double t = guess;
  ValueSlope cur = f(t);
  ++evals;
  for (int iter = 0; iter < 200; ++iter) {
    if (!std::isfinite(cur.value) || !std::isfinite(cur.slope) || !(cur.slope < 0.0)) break;
    const double step = -cur.value / cur.slope;
    if (cur.value <= 0.0) {
      if (-step <= 0.5 * tol) {
        const double lo = t - tol;
        const ValueSlope at_lo = f(lo);
        ++evals;
        if (at_lo.value > 0.0) return {lo, t, evals};
        t = lo;
        cur = at_lo;
        continue;
      }
    } else if (step <= 0.5 * tol) {
      const double hi = t + tol;
      const ValueSlope at_hi = f(hi);
      ++evals;
      if (at_hi.value <= 0.0) return {t, hi, evals};
      t = hi;
      cur = at_hi;
      continue;
    }
    t += step;
    cur = f(t);
    ++evals;
  }
  Bracket b = solve_decreasing([&](double x) { return f(x).value; }, t, 1.0, tol);
  b.evaluations += evals;
  return b;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

double Rng::uniform() noexcept {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::index(std::size_t n) noexcept {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace vtl
