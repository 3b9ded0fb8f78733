#pragma once

#include <optional>
#include <vector>

#include "vtl/coeff.hpp"
#include "vtl/exponent.hpp"
#include "vtl/sequence.hpp"

namespace vtl {

/// (sum_{v >= v_P} sum_m 2^{v(alpha + n/2) q} |lambda_{v,m}|^q chi_{v,m})^{1/q} on
/// the cells of P, zero elsewhere.  |P| <= 1 is required.
GridFunction G_P(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q,
                 const DyadicCube& P);

struct QuantileCertificate {
  DyadicCube cube;
  double threshold = 0.0;              // m_P
  double exceedance = 0.0;             // |{x in P : G_P > m_P}|
  double measure = 0.0;                // |P|
  std::optional<double> next_lower;    // largest grid value of G_P below m_P
  double next_lower_exceedance = 0.0;  // |{G_P > next_lower}|
  /// exceedance < |P|/4 and next_lower_exceedance >= |P|/4, in exact cell counts.
  bool valid = false;
};

/// Smallest grid value t of G_P with |{G_P > t}| < |P|/4.
QuantileCertificate m_P(const CoeffSequence& lambda, const ExponentField& alpha,
                        const ExponentField& q, const DyadicCube& P);

/// Quantile certificate from raw cell values of G_P on P.
QuantileCertificate quantile_of(const DyadicCube& P, std::vector<double> values, double cell_measure);

/// Per cell, max of m_P over the cubes P (|P| <= 1) containing it.
GridFunction m_sup(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q);

struct GoodSets {
  CubeSubsets subsets;  // E_Q = {x in Q : G_Q(x) <= m_sup(x)}
  GridFunction envelope;  // m_sup
  double min_fraction = 0.0;
};

/// Throws InvariantFailure if some |E_Q| < 3|Q|/4.
GoodSets good_sets(const CoeffSequence& lambda, const ExponentField& alpha, const ExponentField& q);

/// ess sup_x (sum_{v,m} 2^{v(alpha + n/2) q} |lambda|^q chi_{E_{v,m}})^{1/q}.
double subset_ess_sup(const CoeffSequence& lambda, const ExponentField& alpha,
                      const ExponentField& q, const CubeSubsets& subsets);

/// T_lambda(s) = sum s_{v,m} conj(lambda_{v,m}).
Complex pairing(const CoeffSequence& lambda, const CoeffSequence& s);

/// Test sequence of functions: level v, cell x holds s_{v, m(x)}(x).
using TestSequence = FunctionSequence;

/// s_{v,m}(x) = 2^{v(-alpha + n/2) q'} |lambda_{v,m}/d|^{q' - 1} sgn(lambda_{v,m}) on Q_{v,m},
/// with sgn z = conj(z)/|z| so that lambda s >= 0.
TestSequence extremal_test_sequence(const CoeffSequence& lambda, const ExponentField& alpha,
                                    const ExponentField& q, double d);

/// sup_P || (2^{v(alpha - n/2)} s_v chi_P |P|^{-1/q})_{v >= v_P} ||_{L^q(l^q)}.
SequenceNorm star_norm(const TestSequence& s, const ExponentField& alpha, const ExponentField& q,
                       double tol = kDefaultTol);

/// |(1/|P|) int_P sum_{v >= v_P} lambda_{v,m(x)} s_v(x) dx|.
double conjugate_functional(const CoeffSequence& lambda, const TestSequence& s, const DyadicCube& P);

struct ConjugateEstimate {
  double value = 0.0;
  DyadicCube cube;
  std::size_t candidate = 0;
  std::vector<double> per_candidate;
};

/// Max over star-normalised candidates and cubes |P| <= 1 of the functional;
/// a lower bound for the conjugate norm.  Zero candidates are skipped.
ConjugateEstimate conjugate_norm_lower(const CoeffSequence& lambda, const ExponentField& alpha,
                                       const ExponentField& q,
                                       const std::vector<TestSequence>& candidates,
                                       double tol = kDefaultTol);

/// The extremal sequence with d = norm_btilde(lambda, -alpha, q', q') followed
/// by `random_count` seeded random sequences.
std::vector<TestSequence> default_candidates(const CoeffSequence& lambda, const ExponentField& alpha,
                                             const ExponentField& q, int random_count,
                                             std::uint64_t seed, double tol = kDefaultTol);

/// D_{v,h,P} = (1/|P|) int_P |s_{v,h}| chi_{v,h} for v >= v_P and Q_{v,h} in P, else 0.
CoeffSequence averaged_sequence(const TestSequence& s, const DyadicCube& P);

struct Prop44Result {
  double norm = 0.0;
  double lower = 0.0;  // norm / c_lower
  double upper = 0.0;  // ess-sup expression at the good sets
};

/// Bracket for the infimum over subset collections of the ess-sup expression.
Prop44Result prop44_check(const CoeffSequence& lambda, const ExponentField& alpha,
                          const ExponentField& q, double c_lower, double tol = kDefaultTol);

}  // namespace vtl
