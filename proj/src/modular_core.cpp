#include "modular_core.hpp"

#include <algorithm>
#include <cmath>

namespace vtl::detail {

ValueSlope log_modular(const LogTerms& terms, double t) {
  const std::size_t n = terms.c.size();
  double top = -kInfinity;
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, terms.c[i] - terms.r[i] * t);
  CompensatedSum s, rs;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(terms.c[i] - terms.r[i] * t - top);
    s += e;
    rs += terms.r[i] * e;
  }
  return {top + std::log(s.value()), -rs.value() / s.value()};
}

double initial_log_scale(const LogTerms& terms) {
  double r_mean = 0.0;
  for (double r : terms.r) r_mean += r;
  r_mean /= static_cast<double>(terms.r.size());
  return log_sum_exp(terms.c) / r_mean;
}

double solve_log_scale(const LogTerms& terms, double tol, double guess) {
  return solve_convex_decreasing([&](double t) { return log_modular(terms, t); }, guess, tol).hi;
}

double solve_log_scale(const LogTerms& terms, double tol) {
  return solve_log_scale(terms, tol, initial_log_scale(terms));
}

}  // namespace vtl::detail
