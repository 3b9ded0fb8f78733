#include "vtl/sequence.hpp"

#include <cmath>

#include "modular_core.hpp"
#include "vtl/error.hpp"

namespace vtl {

namespace {

void check_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw InputError(std::string(what) + ": grid mismatch");
}

// L^q(l^q) localized term; p and q coincide cellwise.
double localized_Lq_lq(const FunctionSequence& fs, const ExponentField& q, const DyadicCube& P,
                       double tol) {
  const Grid& g = fs.grid();
  const double log_w = std::log(g.cell_measure());
  const double log_P = std::log(cube_measure(P.v, g.n));
  const int v0 = std::max(std::max(P.v, 0), fs.v_start);
  detail::LogTerms terms;
  std::vector<double> logs;
  for (std::size_t c : cells_in_cube(g, P)) {
    logs.clear();
    for (int v = v0; v <= fs.v_end(); ++v) {
      const double a = std::abs(fs.levels[static_cast<std::size_t>(v - fs.v_start)][c]);
      if (a > 0.0) logs.push_back(q[c] * std::log(a));
    }
    if (logs.empty()) continue;
    // |a_x|^{q} with a_x the l^q aggregate is exp(log_sum_exp(logs)).
    terms.add(log_w + log_sum_exp(logs) - log_P, q[c]);
  }
  if (terms.empty()) return 0.0;
  return std::exp(detail::solve_log_scale(terms, tol));
}

}  // namespace

FunctionSequence stack(const CoeffSequence& lambda, const ExponentField& alpha,
                       std::optional<double> shift, const CubeSubsets* subsets) {
  const Grid& g = lambda.grid();
  check_grid(g, alpha.grid(), "stack");
  if (alpha.has_infinite()) throw ClassViolation("stack: infinite smoothness");
  if (subsets) check_grid(g, subsets->grid, "stack");
  const double s = shift.value_or(0.5 * g.n);
  FunctionSequence out;
  out.v_start = 0;
  for (int v = 0; v <= g.V_max; ++v) {
    GridFunction f(g, false);
    const auto& lv = lambda.level(v);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      if (subsets && !subsets->contains(v, c)) continue;
      const Complex z = lv[cube_slot_of_cell(g, v, c)];
      if (z == Complex{}) continue;
      f[c] = std::exp2(v * (alpha[c] + s)) * z;
    }
    out.levels.push_back(std::move(f));
  }
  return out;
}

std::vector<DyadicCube> cube_family(const Grid& grid, CubeFamily family) {
  auto cubes = unit_or_smaller_cubes(grid);
  if (family == CubeFamily::all) {
    auto big = large_cubes(grid);
    cubes.insert(cubes.begin(), big.begin(), big.end());
  }
  return cubes;
}

SequenceNorm localized_sup_norm(const FunctionSequence& fs, const ExponentField& p,
                                const ExponentField& q, CubeFamily family, MixedPath path,
                                double tol) {
  const auto cubes = cube_family(fs.grid(), family);
  if (path == MixedPath::lq_Lp) {
    const LocalizedNorm r = localized_norm_lq_Lpp(fs, p, q, cubes, tol);
    return {r.value, r.cube};
  }
  for (std::size_t c = 0; c < p.size(); ++c)
    if (p[c] != q[c]) throw PreconditionError("L^q(l^q) path needs p = q on every cell");
  if (q.has_infinite() || !(q.inf() > 0.0)) throw ClassViolation("L^q(l^q) path: bad exponent");
  SequenceNorm best{-1.0, cubes.front()};
  for (const DyadicCube& P : cubes) {
    const double val = localized_Lq_lq(fs, q, P, tol);
    if (val > best.value) best = {val, P};
  }
  return best;
}

SequenceNorm norm_btilde(const CoeffSequence& lambda, const ExponentField& alpha,
                         const ExponentField& p, const ExponentField& q, CubeFamily family,
                         MixedPath path, double tol) {
  return localized_sup_norm(stack(lambda, alpha), p, q, family, path, tol);
}

SequenceNorm norm_btilde_subset(const CoeffSequence& lambda, const ExponentField& alpha,
                                const ExponentField& p, const ExponentField& q,
                                const CubeSubsets& subsets, double eps, double tol) {
  if (!(eps > 0.0)) throw PreconditionError("norm_btilde_subset: need eps > 0");
  if (!(subsets.min_fraction() > eps))
    throw PreconditionError("norm_btilde_subset: some |E_Q| <= eps |Q|");
  return localized_sup_norm(stack(lambda, alpha, std::nullopt, &subsets), p, q,
                            CubeFamily::unit_or_smaller, MixedPath::lq_Lp, tol);
}

double norm_f(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q) {
  check_grid(lambda.grid(), q.grid(), "norm_f");
  if (!(q.inf() > 0.0)) throw ClassViolation("norm_f: q must be positive");
  const GridFunction a = lq_aggregate(stack(lambda, alpha), q);
  CompensatedSum s;
  for (const Complex& z : a.values()) s += z.real();
  return s.value() * lambda.grid().cell_measure();
}

FunctionSequence weighted_levels(const GridFunction& g, const ExponentField& alpha,
                                 const PhiSystem& sys) {
  check_grid(g.grid(), alpha.grid(), "weighted_levels");
  if (alpha.has_infinite()) throw ClassViolation("weighted_levels: infinite smoothness");
  FunctionSequence fs = lp_decompose(g, sys);
  for (int v = 0; v <= fs.v_end(); ++v) {
    GridFunction& f = fs.levels[static_cast<std::size_t>(v)];
    for (std::size_t c = 0; c < f.size(); ++c) f[c] *= std::exp2(v * alpha[c]);
  }
  return fs;
}

SequenceNorm norm_B_function(const GridFunction& g, const ExponentField& alpha,
                             const ExponentField& p, const ExponentField& q, const PhiSystem& sys,
                             CubeFamily family, double tol) {
  return localized_sup_norm(weighted_levels(g, alpha, sys), p, q, family, MixedPath::lq_Lp, tol);
}

double norm_F_function(const GridFunction& g, const ExponentField& alpha, const ExponentField& p,
                       const ExponentField& q, const PhiSystem& sys, double tol) {
  if (p.has_infinite() || q.has_infinite() || !(p.inf() > 0.0) || !(q.inf() > 0.0))
    throw ClassViolation("norm_F_function: need 0 < p, q < infinity");
  return norm_Lp_lq(weighted_levels(g, alpha, sys), p, q, tol);
}

}  // namespace vtl
