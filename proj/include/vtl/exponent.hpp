#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vtl/grid.hpp"

namespace vtl {

/// Analytic exponent profiles: `const:<v>`, `sin:<base>,<amp>,<freq>`,
/// `step:<a>,<b>,<split>`.
///
/// In two dimensions `sin` averages the profile over both coordinates and
/// `step` splits along x_0.
struct Preset {
  enum class Kind { constant, sine, step };
  Kind kind = Kind::constant;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static Preset parse(const std::string& text);
  double evaluate(std::array<double, 2> x, int n) const;
  /// Limit at infinity, when the profile has one.
  std::optional<double> limit_at_infinity() const;
  std::string str() const;
};

struct LogHolderEstimate {
  double c_local = 0.0;
  std::optional<double> c_decay;
};

/// Membership report for the classes P_0, P and P^log (1/p log-Holder).
struct ClassReport {
  double p_minus = 0.0;
  double p_plus = 0.0;
  bool in_P0 = false;
  bool in_P = false;
  bool log_holder = false;  // 1/p locally log-Holder (and decay, when checked)
  bool plog = false;        // in_P && log_holder
  double c_local_recip = 0.0;
  std::optional<double> c_decay_recip;
  bool refinement_checked = false;
  bool violated_at_refinement = false;
  std::array<double, 3> refinement_constants{0.0, 0.0, 0.0};
};

/// Variable exponent or smoothness sampled at cell centres.
///
/// +infinity is allowed as the L^infinity sentinel; only the ess-sup paths
/// accept it.
class ExponentField {
 public:
  ExponentField(const Grid& grid, std::vector<double> values);
  static ExponentField constant(const Grid& grid, double value);
  static ExponentField from_preset(const Grid& grid, const Preset& preset);
  static ExponentField from_spec(const Grid& grid, const std::string& preset_text);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t cell) const noexcept { return values_[cell]; }
  std::size_t size() const noexcept { return values_.size(); }

  double inf() const noexcept { return inf_; }
  double sup() const noexcept { return sup_; }
  bool has_infinite() const noexcept;
  bool all_infinite() const noexcept;
  bool is_constant() const noexcept { return inf_ == sup_; }

  const std::optional<Preset>& preset() const noexcept { return preset_; }
  std::optional<double> limit_at_infinity() const noexcept { return limit_; }
  void set_limit_at_infinity(std::optional<double> limit) { limit_ = limit; }

  /// Attach a class report; operations that need P^log check for it.
  ExponentField& certify(const ClassReport& report);
  ExponentField& certify();
  const std::optional<ClassReport>& certificate() const noexcept { return certificate_; }

  ExponentField reciprocal() const;  // 1/p with 1/inf = 0
  ExponentField negated() const;
  ExponentField plus(double shift) const;
  ExponentField divided_by(const ExponentField& other) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  double inf_ = 0.0;
  double sup_ = 0.0;
  std::optional<Preset> preset_;
  std::optional<double> limit_;
  std::optional<ClassReport> certificate_;
};

/// Grid log-Holder constants over explicit sample points:
///   c_local = max_{x != y} |g(x)-g(y)| log(e + 1/|x-y|),
///   c_decay = max_x |g(x) - g_inf| log(e + |x|).
LogHolderEstimate estimate_log_holder_constants(std::span<const std::array<double, 2>> points,
                                                std::span<const double> values, int n,
                                                std::optional<double> g_infinity = std::nullopt);

/// Same over the cell centres of a field.  Above 2^14 cells the pair loop runs
/// on a strided subsample.
LogHolderEstimate estimate_log_holder_constants(const ExponentField& g,
                                                std::optional<double> g_infinity = std::nullopt);

inline constexpr std::size_t kLogHolderCellCap = std::size_t{1} << 14;

/// Pointwise p' with 1/p + 1/p' = 1; cells with p = 1 map to +infinity.
ExponentField conjugate_exponent(const ExponentField& p);

ClassReport classify(const ExponentField& p, std::optional<double> g_infinity = std::nullopt);

}  // namespace vtl
