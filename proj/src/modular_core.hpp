#pragma once

#include <vector>

#include "vtl/numeric.hpp"

namespace vtl::detail {

/// Terms of a log-modular  t -> log sum_i exp(c_i - r_i t)  with r_i > 0.
/// Convex and strictly decreasing in t.
struct LogTerms {
  std::vector<double> c;
  std::vector<double> r;

  void add(double ci, double ri) {
    c.push_back(ci);
    r.push_back(ri);
  }
  bool empty() const noexcept { return c.empty(); }
  void clear() noexcept {
    c.clear();
    r.clear();
  }
};

ValueSlope log_modular(const LogTerms& terms, double t);

/// Reasonable starting point: the root for r replaced by its mean.
double initial_log_scale(const LogTerms& terms);

/// Upper end of the root bracket of log_modular; terms must be non-empty.
double solve_log_scale(const LogTerms& terms, double tol, double guess);
double solve_log_scale(const LogTerms& terms, double tol);

}  // namespace vtl::detail
