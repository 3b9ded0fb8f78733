#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "vtl/coeff.hpp"
#include "vtl/exponent.hpp"
#include "vtl/numeric.hpp"

namespace vtl {

/// Pseudorandom complex coefficients with |lambda_{v,m}| <= 2^{-decay v}; an
/// infinite decay leaves only level 0.  Each coefficient is kept with
/// probability `density`.  Identical arguments give identical sequences.
CoeffSequence gen_coeffs(const Grid& grid, std::uint64_t seed, double decay,
                         std::uint64_t stream = 0, double density = 1.0);

/// Real function whose DFT is supported on |xi| <= radius, with random
/// Fourier coefficients.
GridFunction gen_bandlimited(const Grid& grid, std::uint64_t seed, std::uint64_t stream,
                             double radius);

/// Random subsets of exactly floor(eps |Q|/w) + 1 cells in every cube Q.
CubeSubsets random_subsets(const Grid& grid, double eps, std::uint64_t seed, std::uint64_t stream);

struct TrialConfig {
  std::string suite;
  std::uint64_t seed = 1;
  int n = 1;
  int J = 1;
  int L = 9;
  int V_max = 6;
  std::string p;      // preset text, empty for the suite default
  std::string q;
  std::string alpha;
  int trials = 0;     // 0 for the suite default
  double tol = kDefaultTol;
  double decay = 0.5;

  Grid grid() const;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<double> ratios;
  double constant = 0.0;   // max ratio
  double min_ratio = 0.0;
  bool pass = false;
  double runtime = 0.0;    // seconds
  std::vector<std::pair<std::string, std::string>> fields;
  std::string diagnostics;

  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Throws InputError for an unknown suite.
SuiteReport run_suite(const TrialConfig& cfg);

void write_report(std::ostream& os, const SuiteReport& r);
void write_ratios_csv(std::ostream& os, const SuiteReport& r);

}  // namespace vtl
