#include "vtl/mixed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "modular_core.hpp"
#include "vtl/error.hpp"
#include "vtl/lebesgue.hpp"

namespace vtl {

namespace {

// Level modular  (s, t) -> log sum_x exp(c_x - p_x s - r_x t)  with r = p/q:
// s = log mu (outer scale), t = log lambda_v (inner infimum).
struct LevelTerms {
  std::vector<double> c, p, r;
};

double inner_tol(double tol) { return std::max(1e-14, 1e-3 * tol); }

void check_mixed_exponents(const FunctionSequence& fs, const ExponentField& p,
                           const ExponentField& q, const char* what) {
  if (fs.levels.empty()) throw PreconditionError(std::string(what) + ": empty sequence");
  for (const auto& f : fs.levels) {
    if (!(f.grid() == p.grid()) || !(f.grid() == q.grid()))
      throw InputError(std::string(what) + ": grid mismatch");
    if (!f.all_finite()) throw InputError(std::string(what) + ": non-finite values");
  }
  if (p.has_infinite() || q.has_infinite())
    throw ClassViolation(std::string(what) + ": exponents must be finite");
  if (!(p.inf() > 0.0) || !(q.inf() > 0.0))
    throw ClassViolation(std::string(what) + ": exponents must be positive");
}

// t_v(s) and its derivative for one level; `guess` is updated with the root.
struct InnerRoot {
  double t;
  double dt_ds;
};

InnerRoot solve_inner(const LevelTerms& lv, double s, double tol, double& guess) {
  detail::LogTerms terms;
  terms.c.resize(lv.c.size());
  terms.r = lv.r;
  for (std::size_t i = 0; i < lv.c.size(); ++i) terms.c[i] = lv.c[i] - lv.p[i] * s;
  const double t = detail::solve_log_scale(terms, tol, guess);
  guess = t;
  double top = -kInfinity;
  for (std::size_t i = 0; i < lv.c.size(); ++i) top = std::max(top, terms.c[i] - lv.r[i] * t);
  CompensatedSum a, b;
  for (std::size_t i = 0; i < lv.c.size(); ++i) {
    const double w = std::exp(terms.c[i] - lv.r[i] * t - top);
    a += w * lv.p[i];
    b += w * lv.r[i];
  }
  return {t, -a.value() / b.value()};
}

// log mu of the l^q(L^p) norm of the levels (upper bracket end).
double solve_mixed(const std::vector<LevelTerms>& levels, double tol) {
  const double itol = inner_tol(tol);
  // mu >= max_v ||f_v||_p, which starts Newton on the left of the root.
  double s0 = -kInfinity;
  for (const auto& lv : levels) {
    detail::LogTerms terms{lv.c, lv.p};
    s0 = std::max(s0, detail::solve_log_scale(terms, itol));
  }
  std::vector<double> guesses(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    detail::LogTerms terms;
    terms.r = levels[k].r;
    terms.c.resize(levels[k].c.size());
    for (std::size_t i = 0; i < terms.c.size(); ++i) terms.c[i] = levels[k].c[i] - levels[k].p[i] * s0;
    guesses[k] = detail::initial_log_scale(terms);
  }
  std::vector<double> ts(levels.size()), slopes(levels.size());
  const auto outer = [&](double s) -> ValueSlope {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const InnerRoot root = solve_inner(levels[k], s, itol, guesses[k]);
      ts[k] = root.t;
      slopes[k] = root.dt_ds;
    }
    const double h = log_sum_exp(ts);
    CompensatedSum d;
    for (std::size_t k = 0; k < levels.size(); ++k) d += std::exp(ts[k] - h) * slopes[k];
    return {h, d.value()};
  };
  return solve_convex_decreasing(outer, s0, tol).hi;
}

LevelTerms level_terms(const GridFunction& f, const ExponentField& p, const ExponentField& q,
                       std::span<const std::size_t> cells, double log_shift) {
  LevelTerms lv;
  const double log_w = std::log(f.grid().cell_measure());
  for (std::size_t c : cells) {
    const double a = std::abs(f[c]);
    if (a == 0.0) continue;
    lv.c.push_back(log_w + p[c] * std::log(a) + log_shift);
    lv.p.push_back(p[c]);
    lv.r.push_back(p[c] / q[c]);
  }
  return lv;
}

std::vector<std::size_t> all_cells(const Grid& g) {
  std::vector<std::size_t> c(g.cell_count());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = i;
  return c;
}

}  // namespace

double mixed_modular_inf(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                         double tol) {
  check_mixed_exponents(fs, p, q, "mixed_modular_inf");
  const double log_w = std::log(fs.grid().cell_measure());
  CompensatedSum sum;
  for (const GridFunction& f : fs.levels) {
    // rho_p(f / lambda^{1/q}) = sum w |f|^p lambda^{-p/q}
    detail::LogTerms terms;
    for (std::size_t c = 0; c < f.size(); ++c) {
      const double a = std::abs(f[c]);
      if (a > 0.0) terms.add(log_w + p[c] * std::log(a), p[c] / q[c]);
    }
    if (terms.empty()) continue;
    sum += std::exp(detail::solve_log_scale(terms, tol));
  }
  return sum.value();
}

double mixed_modular_simplified(const FunctionSequence& fs, const ExponentField& p,
                                const ExponentField& q, double tol) {
  check_mixed_exponents(fs, p, q, "mixed_modular_simplified");
  const ExponentField pq = p.divided_by(q);
  CompensatedSum sum;
  for (const GridFunction& f : fs.levels) {
    GridFunction g(f.grid(), true);
    for (std::size_t c = 0; c < f.size(); ++c) g[c] = std::pow(std::abs(f[c]), q[c]);
    sum += luxemburg_norm(g, pq, tol);
  }
  return sum.value();
}

double norm_lq_Lp(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                  double tol) {
  check_mixed_exponents(fs, p, q, "norm_lq_Lp");
  const auto cells = all_cells(fs.grid());
  std::vector<LevelTerms> levels;
  for (const GridFunction& f : fs.levels) {
    LevelTerms lv = level_terms(f, p, q, cells, 0.0);
    if (!lv.c.empty()) levels.push_back(std::move(lv));
  }
  if (levels.empty()) return 0.0;
  return std::exp(solve_mixed(levels, tol));
}

GridFunction lq_aggregate(const FunctionSequence& fs, const ExponentField& q) {
  const Grid& g = fs.grid();
  if (!(q.inf() > 0.0)) throw ClassViolation("lq_aggregate: q must be positive");
  GridFunction out(g, true);
  std::vector<double> logs;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (q[c] == kInfinity) {
      double m = 0.0;
      for (const auto& f : fs.levels) m = std::max(m, std::abs(f[c]));
      out[c] = m;
      continue;
    }
    logs.clear();
    for (const auto& f : fs.levels) {
      const double a = std::abs(f[c]);
      if (a > 0.0) logs.push_back(q[c] * std::log(a));
    }
    out[c] = logs.empty() ? 0.0 : std::exp(log_sum_exp(logs) / q[c]);
  }
  return out;
}

double norm_Lp_lq(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                  double tol) {
  if (fs.levels.empty()) throw PreconditionError("norm_Lp_lq: empty sequence");
  for (const auto& f : fs.levels) {
    if (!(f.grid() == p.grid()) || !(f.grid() == q.grid()))
      throw InputError("norm_Lp_lq: grid mismatch");
    if (!f.all_finite()) throw InputError("norm_Lp_lq: non-finite values");
  }
  if (q.has_infinite() && !q.all_infinite())
    throw ClassViolation("norm_Lp_lq: q mixes finite and infinite cells");
  return lp_norm(lq_aggregate(fs, q), p, tol);
}

double localized_term(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                      const DyadicCube& cube, double tol) {
  const Grid& g = fs.grid();
  const auto cells = cells_in_cube(g, cube);
  const double log_shift = -std::log(cube_measure(cube.v, g.n));
  const int v_min = std::max(cube.v, 0);
  std::vector<LevelTerms> levels;
  for (int v = std::max(v_min, fs.v_start); v <= fs.v_end(); ++v) {
    LevelTerms lv = level_terms(fs.levels[static_cast<std::size_t>(v - fs.v_start)], p, q, cells,
                                log_shift);
    if (!lv.c.empty()) levels.push_back(std::move(lv));
  }
  if (levels.empty()) return 0.0;
  return std::exp(solve_mixed(levels, tol));
}

LocalizedNorm localized_norm_lq_Lpp(const FunctionSequence& fs, const ExponentField& p,
                                    const ExponentField& q, const std::vector<DyadicCube>& cubes,
                                    double tol) {
  check_mixed_exponents(fs, p, q, "localized_norm_lq_Lpp");
  if (cubes.empty()) throw PreconditionError("localized_norm_lq_Lpp: empty cube list");
  LocalizedNorm best{-1.0, cubes.front()};
  for (const DyadicCube& P : cubes) {
    const double val = localized_term(fs, p, q, P, tol);
    if (val > best.value) best = {val, P};
  }
  return best;
}

double eta(int n, int v, double N, double r) {
  return std::ldexp(1.0, n * v) * std::pow(1.0 + std::ldexp(r, v), -N);
}

double eta_mass(int n, double N) {
  if (n == 1) return 2.0 / (N - 1.0);
  return 2.0 * std::numbers::pi / ((N - 1.0) * (N - 2.0));
}

double eta_tail_fraction(int n, int J, int v, double N) {
  const double R = std::ldexp(1.0, v + J);
  if (n == 1) return 2.0 * std::pow(1.0 + R, 1.0 - N) / (N - 1.0) / eta_mass(1, N);
  // Mass outside the inscribed disc of radius 2^J bounds the mass outside the box.
  const double tail = 2.0 * std::numbers::pi *
                      (std::pow(1.0 + R, 2.0 - N) / (N - 2.0) - std::pow(1.0 + R, 1.0 - N) / (N - 1.0));
  return tail / eta_mass(2, N);
}

EtaConvolution eta_convolve(const GridFunction& f, int v, double N) {
  const Grid& g = f.grid();
  if (!(N > g.n)) throw PreconditionError("eta_convolve: need N > n");
  const auto off = detail::axis_offsets(g);
  const double h = g.cell_side();
  const double w = g.cell_measure();
  std::vector<Complex> kernel(g.cell_count());
  CompensatedSum mass;
  for (std::size_t c = 0; c < kernel.size(); ++c) {
    const auto idx = g.unravel(c);
    const double d0 = static_cast<double>(off[idx[0]]) * h;
    const double d1 = g.n == 2 ? static_cast<double>(off[idx[1]]) * h : 0.0;
    const double k = eta(g.n, v, N, std::hypot(d0, d1)) * w;
    kernel[c] = k;
    mass += k;
  }
  std::vector<Complex> data(f.values().begin(), f.values().end());
  detail::fft_forward(data, g);
  detail::fft_forward(kernel, g);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= kernel[i];
  detail::fft_inverse(data, g);
  if (f.is_real())
    for (Complex& z : data) z = z.real();
  EtaConvolution out{GridFunction(g, std::move(data), f.is_real()), mass.value(), eta_mass(g.n, N),
                     eta_tail_fraction(g.n, g.J, v, N)};
  return out;
}

MollifierReport measure_mollifier_operator_norm(const ExponentField& p, const ExponentField& q,
                                                double N, MollifierLemma lemma, int trials,
                                                std::uint64_t seed, double tol) {
  require_plog(p, "measure_mollifier_operator_norm");
  if (lemma == MollifierLemma::localized) {
    if (!q.certificate()) throw PreconditionError("measure_mollifier_operator_norm: q has no certificate");
    if (!(p.inf() > 1.0)) throw ClassViolation("measure_mollifier_operator_norm: need p^- > 1");
    if (!(q.inf() > 0.0) || q.has_infinite())
      throw ClassViolation("measure_mollifier_operator_norm: need 0 < q^- <= q^+ < infinity");
  } else {
    require_plog(q, "measure_mollifier_operator_norm");
    if (!(p.inf() > 1.0) || !(q.inf() > 1.0) || p.has_infinite() || q.has_infinite())
      throw ClassViolation("measure_mollifier_operator_norm: exponents must lie in (1, infinity)");
  }
  const Grid& g = p.grid();
  const auto cubes = unit_or_smaller_cubes(g);
  const auto norm = [&](const FunctionSequence& fs) {
    if (lemma == MollifierLemma::localized) return localized_norm_lq_Lpp(fs, p, q, cubes, tol).value;
    return norm_Lp_lq(fs, p, q, tol);
  };
  MollifierReport rep;
  rep.trials = trials;
  rep.level_constant.assign(static_cast<std::size_t>(g.V_max + 1), 0.0);
  for (int v = 0; v <= g.V_max; ++v)
    rep.worst_tail_fraction = std::max(rep.worst_tail_fraction, eta_tail_fraction(g.n, g.J, v, N));

  const auto random_step = [&](Rng& rng, int v, bool sparse) {
    GridFunction f(g, true);
    const std::size_t count = cubes_at_level(g, v);
    std::vector<double> vals(count);
    for (auto& x : vals) x = sparse ? (rng.uniform() < 0.25 ? 1.0 : 0.0) : rng.uniform();
    for (std::size_t c = 0; c < g.cell_count(); ++c) f[c] = vals[cube_slot_of_cell(g, v, c)];
    return f;
  };
  const auto zero_sequence = [&]() {
    FunctionSequence fs;
    fs.levels.assign(static_cast<std::size_t>(g.V_max + 1), GridFunction(g, true));
    return fs;
  };

  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    const bool sparse = t % 2 == 1;
    for (int v = 0; v <= g.V_max; ++v) {
      FunctionSequence fs = zero_sequence(), gs = zero_sequence();
      fs.levels[static_cast<std::size_t>(v)] = random_step(rng, v, sparse);
      gs.levels[static_cast<std::size_t>(v)] = eta_convolve(fs.levels[static_cast<std::size_t>(v)], v, N).result;
      const double den = norm(fs);
      if (den == 0.0) {
        ++rep.skipped;
        continue;
      }
      auto& slot = rep.level_constant[static_cast<std::size_t>(v)];
      slot = std::max(slot, norm(gs) / den);
    }
    FunctionSequence fs = zero_sequence(), gs = zero_sequence();
    for (int v = 0; v <= g.V_max; ++v) {
      fs.levels[static_cast<std::size_t>(v)] = random_step(rng, v, sparse);
      gs.levels[static_cast<std::size_t>(v)] = eta_convolve(fs.levels[static_cast<std::size_t>(v)], v, N).result;
    }
    const double den = norm(fs);
    if (den == 0.0) {
      ++rep.skipped;
      continue;
    }
    rep.joint_constant = std::max(rep.joint_constant, norm(gs) / den);
  }
  double lo = kInfinity, hi = 0.0;
  for (double c : rep.level_constant) {
    if (c == 0.0) continue;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  rep.uniformity = hi > 0.0 ? hi / lo : 0.0;
  return rep;
}

}  // namespace vtl
