#pragma once

#include "vtl/exponent.hpp"
#include "vtl/grid_function.hpp"
#include "vtl/numeric.hpp"

namespace vtl {

/// rho_p(f) = sum over cells of |f|^p(x) times the cell measure.
double modular(const GridFunction& f, const ExponentField& p);

/// inf{lambda > 0 : rho_p(f / lambda) <= 1}.  The returned value is the upper
/// end of the final bracket, so rho_p(f / result) <= 1 always holds.
double luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol = kDefaultTol);

double ess_sup_norm(const GridFunction& f);

/// Dispatches to ess_sup_norm when p is identically infinite and to
/// luxemburg_norm when p is finite; mixed fields are rejected.
double lp_norm(const GridFunction& f, const ExponentField& p, double tol = kDefaultTol);

struct HolderPairing {
  double lhs;  // ||f g||_1
  double rhs;  // 2 ||f||_p ||g||_p'
};

HolderPairing holder_pairing(const GridFunction& f, const GridFunction& g, const ExponentField& p,
                             double tol = kDefaultTol);

struct IndicatorNormCheck {
  double norm_p = 0.0;
  double norm_conj = 0.0;
  double product = 0.0;  // ||chi_B||_p ||chi_B||_p'
  double measure = 0.0;  // |B|
  double ratio_min = 0.0;  // over x in B of ||chi_B||_p / |B|^{1/p(x)}
  double ratio_max = 0.0;
};

/// Requires a P^log certificate on p.
IndicatorNormCheck indicator_norm_check(const DyadicCube& B, const ExponentField& p,
                                        double tol = kDefaultTol);

/// Throws PreconditionError without a certificate, ClassViolation when the
/// certificate does not place the field in P^log.
void require_plog(const ExponentField& p, const char* what);

}  // namespace vtl
