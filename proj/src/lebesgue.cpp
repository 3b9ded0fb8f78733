#include "vtl/lebesgue.hpp"

#include <algorithm>
#include <cmath>

#include "modular_core.hpp"
#include "vtl/error.hpp"

namespace vtl {

namespace {

void check_finite_exponent(const ExponentField& p, const char* what) {
  if (p.has_infinite())
    throw ClassViolation(std::string(what) + ": infinite exponent needs the ess-sup path");
  if (!(p.inf() > 0.0)) throw ClassViolation(std::string(what) + ": exponent must be positive");
}

void check_same_grid(const GridFunction& f, const ExponentField& p) {
  if (!(f.grid() == p.grid())) throw InputError("grid mismatch between function and exponent");
}

}  // namespace

void require_plog(const ExponentField& p, const char* what) {
  const auto& cert = p.certificate();
  if (!cert) throw PreconditionError(std::string(what) + ": exponent has no class certificate");
  if (!cert->plog) throw ClassViolation(std::string(what) + ": exponent is not in P^log");
}

double modular(const GridFunction& f, const ExponentField& p) {
  check_same_grid(f, p);
  check_finite_exponent(p, "modular");
  if (!f.all_finite()) throw InputError("modular: non-finite function values");
  CompensatedSum s;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double a = std::abs(f[c]);
    if (a > 0.0) s += std::pow(a, p[c]);
  }
  return s.value() * f.grid().cell_measure();
}

double luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol) {
  check_same_grid(f, p);
  check_finite_exponent(p, "luxemburg_norm");
  if (!f.all_finite()) throw InputError("luxemburg_norm: non-finite function values");
  const double log_w = std::log(f.grid().cell_measure());
  detail::LogTerms terms;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double a = std::abs(f[c]);
    if (a > 0.0) terms.add(log_w + p[c] * std::log(a), p[c]);
  }
  if (terms.empty()) return 0.0;
  return std::exp(detail::solve_log_scale(terms, tol));
}

double ess_sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (const Complex& z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

double lp_norm(const GridFunction& f, const ExponentField& p, double tol) {
  if (p.all_infinite()) return ess_sup_norm(f);
  if (p.has_infinite())
    throw ClassViolation("lp_norm: exponent mixes finite and infinite cells");
  return luxemburg_norm(f, p, tol);
}

HolderPairing holder_pairing(const GridFunction& f, const GridFunction& g, const ExponentField& p,
                             double tol) {
  check_same_grid(f, p);
  check_same_grid(g, p);
  if (p.has_infinite()) throw ClassViolation("holder_pairing: need p^+ < infinity");
  const ExponentField pc = conjugate_exponent(p);
  CompensatedSum s;
  for (std::size_t c = 0; c < f.size(); ++c) s += std::abs(f[c] * g[c]);
  return {s.value() * f.grid().cell_measure(), 2.0 * lp_norm(f, p, tol) * lp_norm(g, pc, tol)};
}

IndicatorNormCheck indicator_norm_check(const DyadicCube& B, const ExponentField& p, double tol) {
  require_plog(p, "indicator_norm_check");
  const Grid& g = p.grid();
  const GridFunction chi = GridFunction::indicator(g, B);
  const ExponentField pc = conjugate_exponent(p);
  IndicatorNormCheck out;
  out.norm_p = lp_norm(chi, p, tol);
  out.norm_conj = lp_norm(chi, pc, tol);
  out.product = out.norm_p * out.norm_conj;
  const auto cells = cells_in_cube(g, B);
  out.measure = static_cast<double>(cells.size()) * g.cell_measure();
  out.ratio_min = kInfinity;
  out.ratio_max = 0.0;
  for (std::size_t c : cells) {
    const double r = out.norm_p / std::pow(out.measure, 1.0 / p[c]);
    out.ratio_min = std::min(out.ratio_min, r);
    out.ratio_max = std::max(out.ratio_max, r);
  }
  return out;
}

}  // namespace vtl
