#pragma once

#include <vector>

#include "vtl/exponent.hpp"
#include "vtl/grid_function.hpp"
#include "vtl/numeric.hpp"

namespace vtl {

/// sum_v inf{lambda_v > 0 : rho_p(f_v / lambda_v^{1/q}) <= 1}.
double mixed_modular_inf(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                         double tol = kDefaultTol);

/// sum_v || |f_v|^q ||_{p/q}.
double mixed_modular_simplified(const FunctionSequence& fs, const ExponentField& p,
                                const ExponentField& q, double tol = kDefaultTol);

/// l^q(L^p) norm: inf{mu > 0 : mixed modular of fs/mu <= 1}.
double norm_lq_Lp(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                  double tol = kDefaultTol);

/// L^p(l^q) norm: per-cell l^q(x) aggregation, then the Luxemburg norm.  q
/// may be identically infinite (pointwise sup).
double norm_Lp_lq(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                  double tol = kDefaultTol);

/// Pointwise (sum_v |f_v(x)|^q(x))^{1/q(x)}, or max_v |f_v(x)| where q(x) is infinite.
GridFunction lq_aggregate(const FunctionSequence& fs, const ExponentField& q);

struct LocalizedNorm {
  double value = 0.0;
  DyadicCube cube;  // first cube attaining the sup
};

/// sup over P of || (f_v chi_P |P|^{-1/p})_{v >= max(v_P, 0)} ||_{l^q(L^p)}.
/// Cubes of negative level are clipped to the box but keep |P|.
LocalizedNorm localized_norm_lq_Lpp(const FunctionSequence& fs, const ExponentField& p,
                                    const ExponentField& q, const std::vector<DyadicCube>& cubes,
                                    double tol = kDefaultTol);

/// Single-cube term of the localized norm.
double localized_term(const FunctionSequence& fs, const ExponentField& p, const ExponentField& q,
                      const DyadicCube& cube, double tol = kDefaultTol);

/// eta_{v,N}(x) = 2^{nv} (1 + 2^v |x|)^{-N}.
double eta(int n, int v, double N, double r);

/// Integral of eta_{v,N} over R^n (independent of v).
double eta_mass(int n, double N);

/// Upper bound for the fraction of the mass of eta_{v,N} lying outside the
/// centred box [-2^J, 2^J)^n (exact in one dimension).
double eta_tail_fraction(int n, int J, int v, double N);

struct EtaConvolution {
  GridFunction result;
  double kernel_mass = 0.0;    // discrete mass of the periodised kernel
  double continuum_mass = 0.0;
  double tail_fraction = 0.0;  // dropped by periodisation, recorded only
};

/// Cyclic convolution with cell samples of eta_{v,N} times the cell measure,
/// evaluated through the DFT.  N must exceed n.
EtaConvolution eta_convolve(const GridFunction& f, int v, double N);

enum class MollifierLemma { localized, plain };

struct MollifierReport {
  std::vector<double> level_constant;  // max ratio per level v
  double joint_constant = 0.0;         // max ratio over all-level sequences
  double uniformity = 0.0;             // max / min of level_constant
  double worst_tail_fraction = 0.0;
  int trials = 0;
  int skipped = 0;
};

/// Empirical operator norm of (f_v) -> (eta_{v,N} * f_v) on random
/// nonnegative level-v step functions.  `localized` uses the localized
/// l^q(L^p_p) norm over unit-or-smaller cubes, `plain` uses L^p(l^q).
MollifierReport measure_mollifier_operator_norm(const ExponentField& p, const ExponentField& q,
                                                double N, MollifierLemma lemma, int trials,
                                                std::uint64_t seed, double tol = 1e-9);

}  // namespace vtl
