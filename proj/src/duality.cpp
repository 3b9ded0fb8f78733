#include "vtl/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vtl/error.hpp"

namespace vtl {

namespace {

void check_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw InputError(std::string(what) + ": grid mismatch");
}

void check_unit(const Grid& g, const DyadicCube& P, const char* what) {
  if (P.v < 0) throw PreconditionError(std::string(what) + ": need |P| <= 1");
  if (P.v > g.V_max) throw PreconditionError(std::string(what) + ": cube level above V_max");
}

void check_q(const ExponentField& q, const char* what) {
  if (q.has_infinite() || !(q.inf() > 0.0))
    throw ClassViolation(std::string(what) + ": need 0 < q < infinity");
}

// tails[v][c] = sum_{v' >= v} 2^{v'(alpha + n/2) q} |lambda|^q at cell c; tails[V_max + 1] = 0.
std::vector<std::vector<double>> level_tails(const CoeffSequence& lambda, const ExponentField& alpha,
                                             const ExponentField& q) {
  const Grid& g = lambda.grid();
  const std::size_t N = g.cell_count();
  std::vector<std::vector<double>> tails(static_cast<std::size_t>(g.V_max) + 2,
                                         std::vector<double>(N, 0.0));
  for (int v = g.V_max; v >= 0; --v) {
    const auto& lv = lambda.level(v);
    auto& cur = tails[static_cast<std::size_t>(v)];
    const auto& next = tails[static_cast<std::size_t>(v) + 1];
    for (std::size_t c = 0; c < N; ++c) {
      const double a = std::abs(lv[cube_slot_of_cell(g, v, c)]);
      double t = 0.0;
      if (a > 0.0)
        t = std::exp(q[c] * (v * (alpha[c] + 0.5 * g.n) * std::numbers::ln2 + std::log(a)));
      cur[c] = next[c] + t;
    }
  }
  return tails;
}

double root_q(double t, double q) { return t > 0.0 ? std::pow(t, 1.0 / q) : 0.0; }

void check_inputs(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q,
                  const char* what) {
  check_grid(lambda.grid(), alpha.grid(), what);
  check_grid(lambda.grid(), q.grid(), what);
  if (alpha.has_infinite()) throw ClassViolation(std::string(what) + ": infinite smoothness");
  check_q(q, what);
}

}  // namespace

GridFunction G_P(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q,
                 const DyadicCube& P) {
  check_inputs(lambda, alpha, q, "G_P");
  const Grid& g = lambda.grid();
  check_unit(g, P, "G_P");
  GridFunction out(g);
  const double s = 0.5 * g.n;
  for (std::size_t c : cells_in_cube(g, P)) {
    double t = 0.0;
    for (int v = P.v; v <= g.V_max; ++v) {
      const double a = std::abs(lambda.level(v)[cube_slot_of_cell(g, v, c)]);
      if (a > 0.0) t += std::exp(q[c] * (v * (alpha[c] + s) * std::numbers::ln2 + std::log(a)));
    }
    out[c] = root_q(t, q[c]);
  }
  return out;
}

QuantileCertificate quantile_of(const DyadicCube& P, std::vector<double> values, double cell_measure) {
  QuantileCertificate cert;
  cert.cube = P;
  const std::size_t N = values.size();
  cert.measure = static_cast<double>(N) * cell_measure;
  if (N == 0) throw PreconditionError("quantile_of: empty cube");
  std::sort(values.begin(), values.end());
  // count_gt(values[i]) = N - (index one past the last copy of values[i]).
  std::size_t i = 0;
  std::optional<double> prev;
  std::size_t prev_gt = 0;
  while (i < N) {
    std::size_t j = i;
    while (j < N && values[j] == values[i]) ++j;
    const std::size_t gt = N - j;
    if (4 * gt < N) {
      cert.threshold = values[i];
      cert.exceedance = static_cast<double>(gt) * cell_measure;
      cert.next_lower = prev;
      cert.next_lower_exceedance = static_cast<double>(prev_gt) * cell_measure;
      cert.valid = !prev || 4 * prev_gt >= N;
      return cert;
    }
    prev = values[i];
    prev_gt = gt;
    i = j;
  }
  throw InvariantFailure("quantile_of: no admissible threshold");
}

QuantileCertificate m_P(const CoeffSequence& lambda, const ExponentField& alpha,
                        const ExponentField& q, const DyadicCube& P) {
  const GridFunction G = G_P(lambda, alpha, q, P);
  const Grid& g = lambda.grid();
  std::vector<double> vals;
  for (std::size_t c : cells_in_cube(g, P)) vals.push_back(G[c].real());
  return quantile_of(P, std::move(vals), g.cell_measure());
}

namespace {

struct Envelope {
  std::vector<std::vector<double>> tails;
  std::vector<double> m;
};

Envelope envelope(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q) {
  const Grid& g = lambda.grid();
  Envelope env{level_tails(lambda, alpha, q), std::vector<double>(g.cell_count(), 0.0)};
  const double w = g.cell_measure();
  for (int v = 0; v <= g.V_max; ++v) {
    const std::size_t K = cubes_at_level(g, v);
    std::vector<std::vector<std::size_t>> cells(K);
    for (std::size_t c = 0; c < g.cell_count(); ++c) cells[cube_slot_of_cell(g, v, c)].push_back(c);
    const auto& tv = env.tails[static_cast<std::size_t>(v)];
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<double> vals;
      vals.reserve(cells[k].size());
      for (std::size_t c : cells[k]) vals.push_back(root_q(tv[c], q[c]));
      const QuantileCertificate cert = quantile_of(cube_from_slot(g, v, k), std::move(vals), w);
      for (std::size_t c : cells[k]) env.m[c] = std::max(env.m[c], cert.threshold);
    }
  }
  return env;
}

}  // namespace

GridFunction m_sup(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q) {
  check_inputs(lambda, alpha, q, "m_sup");
  const Envelope env = envelope(lambda, alpha, q);
  return GridFunction::from_real(lambda.grid(), env.m);
}

GoodSets good_sets(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q) {
  check_inputs(lambda, alpha, q, "good_sets");
  const Grid& g = lambda.grid();
  const Envelope env = envelope(lambda, alpha, q);
  GoodSets out{CubeSubsets::full(g), GridFunction::from_real(g, env.m), 1.0};
  for (int v = 0; v <= g.V_max; ++v) {
    const auto& tv = env.tails[static_cast<std::size_t>(v)];
    auto& mask = out.subsets.masks[static_cast<std::size_t>(v)];
    for (std::size_t c = 0; c < g.cell_count(); ++c)
      mask[c] = root_q(tv[c], q[c]) <= env.m[c] ? 1 : 0;
  }
  out.min_fraction = out.subsets.min_fraction();
  if (out.min_fraction < 0.75)
    throw InvariantFailure("good_sets: some |E_Q| < 3|Q|/4 (fraction " +
                           std::to_string(out.min_fraction) + ")");
  return out;
}

double subset_ess_sup(const CoeffSequence& lambda, const ExponentField& alpha,
                      const ExponentField& q, const CubeSubsets& subsets) {
  check_inputs(lambda, alpha, q, "subset_ess_sup");
  const GridFunction a = lq_aggregate(stack(lambda, alpha, std::nullopt, &subsets), q);
  double best = 0.0;
  for (const Complex& z : a.values()) best = std::max(best, z.real());
  return best;
}

Complex pairing(const CoeffSequence& lambda, const CoeffSequence& s) {
  check_grid(lambda.grid(), s.grid(), "pairing");
  Complex acc{};
  for (int v = 0; v <= lambda.max_level(); ++v) {
    const auto& a = lambda.level(v);
    const auto& b = s.level(v);
    if (a.size() != b.size()) throw InputError("pairing: index mismatch");
    for (std::size_t k = 0; k < a.size(); ++k) acc += b[k] * std::conj(a[k]);
  }
  return acc;
}

TestSequence extremal_test_sequence(const CoeffSequence& lambda, const ExponentField& alpha,
                                    const ExponentField& q, double d) {
  check_inputs(lambda, alpha, q, "extremal_test_sequence");
  if (!(q.inf() > 1.0)) throw ClassViolation("extremal_test_sequence: need q^- > 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw PreconditionError("extremal_test_sequence: need d > 0");
  const Grid& g = lambda.grid();
  TestSequence s;
  s.v_start = 0;
  for (int v = 0; v <= g.V_max; ++v) {
    GridFunction f(g, false);
    const auto& lv = lambda.level(v);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const Complex z = lv[cube_slot_of_cell(g, v, c)];
      const double a = std::abs(z);
      if (a == 0.0) continue;
      const double qc = q[c] / (q[c] - 1.0);
      const double mag = std::exp(v * (-alpha[c] + 0.5 * g.n) * qc * std::numbers::ln2 +
                                  (qc - 1.0) * std::log(a / d));
      f[c] = mag * std::conj(z) / a;
    }
    s.levels.push_back(std::move(f));
  }
  return s;
}

SequenceNorm star_norm(const TestSequence& s, const ExponentField& alpha, const ExponentField& q,
                       double tol) {
  const Grid& g = s.grid();
  check_grid(g, alpha.grid(), "star_norm");
  check_grid(g, q.grid(), "star_norm");
  if (alpha.has_infinite()) throw ClassViolation("star_norm: infinite smoothness");
  FunctionSequence w = s;
  for (int v = w.v_start; v <= w.v_end(); ++v) {
    GridFunction& f = w.levels[static_cast<std::size_t>(v - w.v_start)];
    for (std::size_t c = 0; c < f.size(); ++c) f[c] *= std::exp2(v * (alpha[c] - 0.5 * g.n));
  }
  return localized_sup_norm(w, q, q, CubeFamily::unit_or_smaller, MixedPath::Lp_lq, tol);
}

namespace {

// Per level v, the sums over each level-v cube P of sum_{v' >= v} lambda s_{v'} w / |P|.
std::vector<std::vector<Complex>> functional_by_cube(const CoeffSequence& lambda,
                                                     const TestSequence& s) {
  const Grid& g = lambda.grid();
  check_grid(g, s.grid(), "conjugate_functional");
  const std::size_t N = g.cell_count();
  std::vector<Complex> tail(N, Complex{});
  std::vector<std::vector<Complex>> out(static_cast<std::size_t>(g.V_max) + 1);
  const double w = g.cell_measure();
  for (int v = g.V_max; v >= 0; --v) {
    if (v >= s.v_start && v <= s.v_end()) {
      const GridFunction& f = s.levels[static_cast<std::size_t>(v - s.v_start)];
      const auto& lv = lambda.level(v);
      for (std::size_t c = 0; c < N; ++c)
        if (f[c] != Complex{}) tail[c] += lv[cube_slot_of_cell(g, v, c)] * f[c];
    }
    auto& sums = out[static_cast<std::size_t>(v)];
    sums.assign(cubes_at_level(g, v), Complex{});
    for (std::size_t c = 0; c < N; ++c) sums[cube_slot_of_cell(g, v, c)] += tail[c];
    const double scale = w / cube_measure(v, g.n);
    for (auto& z : sums) z *= scale;
  }
  return out;
}

}  // namespace

double conjugate_functional(const CoeffSequence& lambda, const TestSequence& s, const DyadicCube& P) {
  check_unit(lambda.grid(), P, "conjugate_functional");
  const auto sums = functional_by_cube(lambda, s);
  return std::abs(sums[static_cast<std::size_t>(P.v)][cube_slot(lambda.grid(), P)]);
}

ConjugateEstimate conjugate_norm_lower(const CoeffSequence& lambda, const ExponentField& alpha,
                                       const ExponentField& q,
                                       const std::vector<TestSequence>& candidates, double tol) {
  if (candidates.empty()) throw PreconditionError("conjugate_norm_lower: no candidates");
  const Grid& g = lambda.grid();
  ConjugateEstimate best;
  best.cube = DyadicCube{};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double sn = star_norm(candidates[i], alpha, q, tol).value;
    double val = 0.0;
    DyadicCube at{};
    if (sn > 0.0) {
      const auto sums = functional_by_cube(lambda, candidates[i]);
      for (int v = 0; v <= g.V_max; ++v) {
        const auto& lv = sums[static_cast<std::size_t>(v)];
        for (std::size_t k = 0; k < lv.size(); ++k) {
          const double x = std::abs(lv[k]) / sn;
          if (x > val) {
            val = x;
            at = cube_from_slot(g, v, k);
          }
        }
      }
    }
    best.per_candidate.push_back(val);
    if (val > best.value) {
      best.value = val;
      best.cube = at;
      best.candidate = i;
    }
  }
  return best;
}

std::vector<TestSequence> default_candidates(const CoeffSequence& lambda, const ExponentField& alpha,
                                             const ExponentField& q, int random_count,
                                             std::uint64_t seed, double tol) {
  const Grid& g = lambda.grid();
  std::vector<TestSequence> out;
  if (!lambda.is_zero()) {
    const ExponentField qc = conjugate_exponent(q);
    const double d =
        norm_btilde(lambda, alpha.negated(), qc, qc, CubeFamily::unit_or_smaller, MixedPath::Lp_lq, tol)
            .value;
    out.push_back(extremal_test_sequence(lambda, alpha, q, d));
  }
  for (int t = 0; t < random_count; ++t) {
    Rng rng(seed, 0x5eedu + static_cast<std::uint64_t>(t));
    const bool aligned = (t % 2) == 0;
    TestSequence s;
    s.v_start = 0;
    for (int v = 0; v <= g.V_max; ++v) {
      GridFunction f(g, false);
      const auto& lv = lambda.level(v);
      const double decay = std::exp2(v * (0.5 * g.n - alpha.sup()));
      for (std::size_t c = 0; c < g.cell_count(); ++c) {
        const double mag = rng.uniform() * decay;
        Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        const Complex z = lv[cube_slot_of_cell(g, v, c)];
        if (aligned && z != Complex{}) phase = std::conj(z) / std::abs(z);
        f[c] = mag * phase;
      }
      s.levels.push_back(std::move(f));
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw PreconditionError("default_candidates: nothing to return");
  return out;
}

CoeffSequence averaged_sequence(const TestSequence& s, const DyadicCube& P) {
  const Grid& g = s.grid();
  check_unit(g, P, "averaged_sequence");
  CoeffSequence D(g);
  const double scale = g.cell_measure() / cube_measure(P.v, g.n);
  const auto cells = cells_in_cube(g, P);
  for (int v = std::max(P.v, s.v_start); v <= std::min(s.v_end(), g.V_max); ++v) {
    const GridFunction& f = s.levels[static_cast<std::size_t>(v - s.v_start)];
    auto& dv = D.level(v);
    for (std::size_t c : cells) dv[cube_slot_of_cell(g, v, c)] += std::abs(f[c]) * scale;
  }
  return D;
}

Prop44Result prop44_check(const CoeffSequence& lambda, const ExponentField& alpha,
                          const ExponentField& q, double c_lower, double tol) {
  if (!(c_lower > 0.0)) throw PreconditionError("prop44_check: need c_lower > 0");
  Prop44Result r;
  r.norm = norm_btilde(lambda, alpha, q, q, CubeFamily::unit_or_smaller, MixedPath::Lp_lq, tol).value;
  r.lower = r.norm / c_lower;
  r.upper = subset_ess_sup(lambda, alpha, q, good_sets(lambda, alpha, q).subsets);
  return r;
}

}  // namespace vtl
