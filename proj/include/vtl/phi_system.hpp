#pragma once

#include <string>
#include <vector>

#include "vtl/coeff.hpp"
#include "vtl/grid_function.hpp"

namespace vtl {

/// Smooth radial cutoff: 1 on r <= 1, 0 on r >= 2, exp(-1/t) glue between.
double cutoff(double r);

/// Resolution of unity: level 0 is cutoff(r), level v >= 1 is
/// cutoff(2^-v r) - cutoff(2^(1-v) r).  Levels 0..V_max sum to 1 on r <= 2^V_max.
double partition_weight(int v, double r);

/// Analysis/synthesis filters (Fourier multipliers, radial):
///   level 0: sqrt(cutoff(r)),  level v >= 1: phi_hat(2^-v r)
/// with phi_hat(r) = sqrt(cutoff(r) - cutoff(2r)), so the squared filters
/// reproduce partition_weight exactly.
double Phi_hat(double r);
double phi_hat(double r);
double level_filter(int v, double r);

struct PhiCertificate {
  std::string cutoff = "exp-glue";
  double samples_per_unit = 0.0;
  double phi0_lower = 0.0;          // min |F Phi| on |xi| <= 5/3
  double phi_lower = 0.0;           // min |F phi| on 3/5 <= |xi| <= 5/3
  double d_min = 0.0;               // min D on the filter supports
  double calderon_residual = 0.0;   // on |xi| <= 2^V_max, both grids
  double partition_residual = 0.0;  // on |xi| <= 2^V_max, both grids
  double moment_max = 0.0;          // max |F phi| on |xi| < 1/2
  bool supports_exact = false;
  double dft_spacing = 0.0;
  std::size_t dft_transition_samples = 0;  // DFT radii in (1, 2)
  bool passes(double tol = 1e-8) const;
};

/// Frazier-Jawerth quadruple sampled on the DFT grid of `grid`, together
/// with the partition family and its certificate.
struct PhiSystem {
  Grid grid;
  std::vector<double> radius;                  // |xi| per DFT index
  std::vector<double> Phi, phi, Psi, psi;      // base filters on the DFT grid
  std::vector<std::vector<double>> partition;  // partition_weight(v, |xi|), v = 0..V_max
  std::vector<std::vector<double>> analysis;   // F Phi, F phi(2^-v .) on the DFT grid
  std::vector<std::vector<double>> synthesis;  // F Psi, F psi(2^-v .) on the DFT grid
  PhiCertificate certificate;
};

inline constexpr double kDefaultSamplesPerUnit = 256.0;

std::vector<std::vector<double>> build_partition(const Grid& grid);

/// Throws ResolutionError when the grid cannot carry the top band or the
/// certification grid is too coarse, ConstructionError when D degenerates.
PhiSystem build_fj_system(const Grid& grid, double samples_per_unit = kDefaultSamplesPerUnit);
PhiSystem build_fj_system(int n, int J, int L, int V_max,
                          double samples_per_unit = kDefaultSamplesPerUnit);

/// f_v = phi_v * f with the partition weights; levels 0..V_max.
FunctionSequence lp_decompose(const GridFunction& f, const PhiSystem& sys);

/// S_phi: lambda_{v,m} = 2^{-vn/2} (phi~_v * f)(2^-v m).
CoeffSequence analyze(const GridFunction& f, const PhiSystem& sys);

/// T_psi: sum_{v,m} lambda_{v,m} psi_{v,m} sampled at cell centres.
GridFunction synthesize(const CoeffSequence& lambda, const PhiSystem& sys);

/// Discrete inner product sum f conj(g) times the cell measure.
Complex inner_product(const GridFunction& f, const GridFunction& g);

/// sum lambda conj(mu) over all indices.
Complex coefficient_inner_product(const CoeffSequence& a, const CoeffSequence& b);

}  // namespace vtl
