#pragma once

#include <optional>

#include "vtl/coeff.hpp"
#include "vtl/exponent.hpp"
#include "vtl/mixed.hpp"
#include "vtl/phi_system.hpp"

namespace vtl {

/// Level v of the result is x -> 2^{v(alpha(x) + shift)} lambda_{v, m(x)}, with
/// shift = n/2 by default.  With `subsets`, cells outside E_Q are zeroed.
FunctionSequence stack(const CoeffSequence& lambda, const ExponentField& alpha,
                       std::optional<double> shift = std::nullopt,
                       const CubeSubsets* subsets = nullptr);

enum class CubeFamily {
  unit_or_smaller,  // |P| <= 1
  all,              // also 1 < |P| <= 2^{n(J+1)}, levels clamped at 0
};

enum class MixedPath {
  lq_Lp,  // l^q(L^p)
  Lp_lq,  // L^q(l^q); requires p = q
};

struct SequenceNorm {
  double value = 0.0;
  DyadicCube cube;  // attaining cube
};

std::vector<DyadicCube> cube_family(const Grid& grid, CubeFamily family);

/// Localized sup norm of a function sequence (levels from 0):
///   sup_P || (f_v chi_P |P|^{-1/p})_{v >= max(v_P, 0)} ||
SequenceNorm localized_sup_norm(const FunctionSequence& fs, const ExponentField& p,
                                const ExponentField& q, CubeFamily family = CubeFamily::unit_or_smaller,
                                MixedPath path = MixedPath::lq_Lp, double tol = kDefaultTol);

SequenceNorm norm_btilde(const CoeffSequence& lambda, const ExponentField& alpha,
                         const ExponentField& p, const ExponentField& q,
                         CubeFamily family = CubeFamily::unit_or_smaller,
                         MixedPath path = MixedPath::lq_Lp, double tol = kDefaultTol);

/// norm_btilde with chi_{E_Q} in place of chi_Q; every |E_Q| must exceed eps |Q|.
SequenceNorm norm_btilde_subset(const CoeffSequence& lambda, const ExponentField& alpha,
                                const ExponentField& p, const ExponentField& q,
                                const CubeSubsets& subsets, double eps,
                                double tol = kDefaultTol);

/// f^{alpha}_{1,q}: L^1 norm of the pointwise l^q aggregate of stack(lambda, alpha).
double norm_f(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q);

/// Littlewood-Paley levels weighted by 2^{v alpha(x)}.
FunctionSequence weighted_levels(const GridFunction& g, const ExponentField& alpha,
                                 const PhiSystem& sys);

SequenceNorm norm_B_function(const GridFunction& g, const ExponentField& alpha,
                             const ExponentField& p, const ExponentField& q, const PhiSystem& sys,
                             CubeFamily family = CubeFamily::unit_or_smaller,
                             double tol = kDefaultTol);

double norm_F_function(const GridFunction& g, const ExponentField& alpha, const ExponentField& p,
                       const ExponentField& q, const PhiSystem& sys, double tol = kDefaultTol);

}  // namespace vtl
