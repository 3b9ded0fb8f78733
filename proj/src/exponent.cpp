#include "vtl/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vtl/error.hpp"
#include "vtl/numeric.hpp"

namespace vtl {

namespace {

std::vector<double> parse_numbers(const std::string& body, std::size_t expected,
                                  const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double x = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(x);
    } catch (const std::exception&) {
      throw InputError("preset '" + text + "': bad number '" + item + "'");
    }
  }
  if (out.size() != expected)
    throw InputError("preset '" + text + "': expected " + std::to_string(expected) + " values");
  return out;
}

// max |g(x)-g(y)| log(e + 1/|x-y|) over a lattice of points spaced `step`
// apart with `dims` points per axis.  Offsets are visited nearest first so
// that the remaining ones can be skipped once range * weight cannot win.
double lattice_c_local(const std::vector<double>& g, int n, std::size_t dims, double step) {
  double lo = kInfinity, hi = -kInfinity;
  for (double x : g) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double range = hi - lo;
  if (!(range > 0.0)) return 0.0;
  double best = 0.0;
  const auto weight = [&](double dist) { return std::log(std::numbers::e + 1.0 / dist); };
  if (n == 1) {
    for (std::size_t k = 1; k < dims; ++k) {
      const double w = weight(static_cast<double>(k) * step);
      if (range * w <= best) break;
      double m = 0.0;
      for (std::size_t i = 0; i + k < dims; ++i) m = std::max(m, std::abs(g[i + k] - g[i]));
      best = std::max(best, m * w);
    }
    return best;
  }
  // Offsets (a, b) with a >= 0, and b > 0 when a == 0, cover each unordered pair once.
  struct Offset {
    std::size_t a;
    std::ptrdiff_t b;
    double w;
  };
  std::vector<Offset> offsets;
  const auto D = static_cast<std::ptrdiff_t>(dims);
  for (std::ptrdiff_t a = 0; a < D; ++a)
    for (std::ptrdiff_t b = -(D - 1); b < D; ++b) {
      if (a == 0 && b <= 0) continue;
      const double dist = step * std::hypot(static_cast<double>(a), static_cast<double>(b));
      offsets.push_back({static_cast<std::size_t>(a), b, weight(dist)});
    }
  std::sort(offsets.begin(), offsets.end(), [](const Offset& x, const Offset& y) { return x.w > y.w; });
  for (const Offset& o : offsets) {
    if (range * o.w <= best) break;
    double m = 0.0;
    const std::ptrdiff_t b0 = std::max<std::ptrdiff_t>(0, -o.b);
    const std::ptrdiff_t b1 = std::min<std::ptrdiff_t>(D, D - o.b);
    for (std::size_t i = 0; i + o.a < dims; ++i)
      for (std::ptrdiff_t j = b0; j < b1; ++j) {
        const double d = g[(i + o.a) * dims + static_cast<std::size_t>(j + o.b)] -
                         g[i * dims + static_cast<std::size_t>(j)];
        m = std::max(m, std::abs(d));
      }
    best = std::max(best, m * o.w);
  }
  return best;
}

double neighbour_c_local(const ExponentField& f) {
  const Grid& gr = f.grid();
  const std::size_t M = gr.cells_per_axis();
  const double h = gr.cell_side();
  const double w1 = std::log(std::numbers::e + 1.0 / h);
  const double w2 = std::log(std::numbers::e + 1.0 / (h * std::numbers::sqrt2));
  double best = 0.0;
  const auto v = f.values();
  if (gr.n == 1) {
    for (std::size_t i = 0; i + 1 < M; ++i) best = std::max(best, std::abs(v[i + 1] - v[i]) * w1);
    return best;
  }
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) {
      const double x = v[i * M + j];
      if (j + 1 < M) best = std::max(best, std::abs(v[i * M + j + 1] - x) * w1);
      if (i + 1 < M) {
        best = std::max(best, std::abs(v[(i + 1) * M + j] - x) * w1);
        if (j + 1 < M) best = std::max(best, std::abs(v[(i + 1) * M + j + 1] - x) * w2);
        if (j > 0) best = std::max(best, std::abs(v[(i + 1) * M + j - 1] - x) * w2);
      }
    }
  return best;
}

void require_finite(const ExponentField& f, const char* op) {
  if (f.has_infinite())
    throw ClassViolation(std::string(op) + ": infinite exponent outside the L^infinity path");
}

}  // namespace

Preset Preset::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("preset '" + text + "': missing ':'");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  Preset p;
  if (kind == "const") {
    p.kind = Kind::constant;
    p.a = parse_numbers(body, 1, text)[0];
  } else if (kind == "sin") {
    const auto v = parse_numbers(body, 3, text);
    p.kind = Kind::sine;
    p.a = v[0];
    p.b = v[1];
    p.c = v[2];
  } else if (kind == "step") {
    const auto v = parse_numbers(body, 3, text);
    p.kind = Kind::step;
    p.a = v[0];
    p.b = v[1];
    p.c = v[2];
  } else {
    throw InputError("unknown preset kind '" + kind + "'");
  }
  return p;
}

double Preset::evaluate(std::array<double, 2> x, int n) const {
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::sine: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::sin(2.0 * std::numbers::pi * c * x[i]);
      return a + b * s / n;
    }
    case Kind::step:
      return x[0] < c ? a : b;
  }
  return a;
}

std::optional<double> Preset::limit_at_infinity() const {
  if (kind == Kind::constant) return a;
  if (kind == Kind::sine && b == 0.0) return a;
  if (kind == Kind::step && a == b) return a;
  return std::nullopt;
}

std::string Preset::str() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::constant:
      os << "const:" << a;
      break;
    case Kind::sine:
      os << "sin:" << a << ',' << b << ',' << c;
      break;
    case Kind::step:
      os << "step:" << a << ',' << b << ',' << c;
      break;
  }
  return os.str();
}

ExponentField::ExponentField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count())
    throw InputError("exponent: expected " + std::to_string(grid_.cell_count()) + " values, got " +
                     std::to_string(values_.size()));
  inf_ = kInfinity;
  sup_ = -kInfinity;
  for (double x : values_) {
    if (std::isnan(x) || x == -kInfinity) throw InputError("exponent: non-finite value");
    inf_ = std::min(inf_, x);
    sup_ = std::max(sup_, x);
  }
}

ExponentField ExponentField::constant(const Grid& grid, double value) {
  ExponentField f(grid, std::vector<double>(grid.cell_count(), value));
  f.preset_ = Preset{Preset::Kind::constant, value, 0.0, 0.0};
  if (std::isfinite(value)) f.limit_ = value;
  f.certify();
  return f;
}

ExponentField ExponentField::from_preset(const Grid& grid, const Preset& preset) {
  std::vector<double> v(grid.cell_count());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = preset.evaluate(grid.cell_center(c), grid.n);
  ExponentField f(grid, std::move(v));
  f.preset_ = preset;
  f.limit_ = preset.limit_at_infinity();
  f.certify();
  return f;
}

ExponentField ExponentField::from_spec(const Grid& grid, const std::string& preset_text) {
  if (preset_text == "inf") return constant(grid, kInfinity);
  return from_preset(grid, Preset::parse(preset_text));
}

bool ExponentField::has_infinite() const noexcept { return sup_ == kInfinity; }
bool ExponentField::all_infinite() const noexcept { return inf_ == kInfinity; }

ExponentField& ExponentField::certify(const ClassReport& report) {
  certificate_ = report;
  return *this;
}

ExponentField& ExponentField::certify() {
  certificate_ = classify(*this, limit_);
  return *this;
}

ExponentField ExponentField::reciprocal() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (values_[i] == 0.0) throw ClassViolation("exponent: reciprocal of zero");
    v[i] = values_[i] == kInfinity ? 0.0 : 1.0 / values_[i];
  }
  ExponentField f(grid_, std::move(v));
  if (limit_ && *limit_ != 0.0) f.limit_ = 1.0 / *limit_;
  return f;
}

ExponentField ExponentField::negated() const {
  require_finite(*this, "negated");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -values_[i];
  ExponentField f(grid_, std::move(v));
  if (limit_) f.limit_ = -*limit_;
  return f;
}

ExponentField ExponentField::plus(double shift) const {
  require_finite(*this, "plus");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + shift;
  ExponentField f(grid_, std::move(v));
  if (limit_) f.limit_ = *limit_ + shift;
  return f;
}

ExponentField ExponentField::divided_by(const ExponentField& other) const {
  require_finite(*this, "divided_by");
  require_finite(other, "divided_by");
  if (!(other.grid() == grid_)) throw InputError("exponent: grid mismatch");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (other.values_[i] == 0.0) throw ClassViolation("exponent: division by zero exponent");
    v[i] = values_[i] / other.values_[i];
  }
  ExponentField f(grid_, std::move(v));
  if (limit_ && other.limit_ && *other.limit_ != 0.0) f.limit_ = *limit_ / *other.limit_;
  return f;
}

LogHolderEstimate estimate_log_holder_constants(std::span<const std::array<double, 2>> points,
                                                std::span<const double> values, int n,
                                                std::optional<double> g_infinity) {
  if (points.size() != values.size()) throw InputError("log-Holder: size mismatch");
  if (points.size() < 2) throw DegenerateInputError("log-Holder: need at least 2 points");
  LogHolderEstimate est;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) d2 += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
      const double dist = std::sqrt(d2);
      if (dist == 0.0) continue;
      est.c_local = std::max(est.c_local, std::abs(values[i] - values[j]) *
                                              std::log(std::numbers::e + 1.0 / dist));
    }
  if (g_infinity) {
    double c = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double r2 = 0.0;
      for (int k = 0; k < n; ++k) r2 += points[i][k] * points[i][k];
      c = std::max(c, std::abs(values[i] - *g_infinity) * std::log(std::numbers::e + std::sqrt(r2)));
    }
    est.c_decay = c;
  }
  return est;
}

LogHolderEstimate estimate_log_holder_constants(const ExponentField& g,
                                                std::optional<double> g_infinity) {
  const Grid& gr = g.grid();
  if (gr.cell_count() < 2) throw DegenerateInputError("log-Holder: need at least 2 cells");
  if (g.has_infinite()) throw ClassViolation("log-Holder: infinite exponent values");
  const std::size_t M = gr.cells_per_axis();
  std::size_t stride = 1;
  auto lattice_points = [&](std::size_t s) {
    const std::size_t d = (M + s - 1) / s;
    return gr.n == 1 ? d : d * d;
  };
  while (lattice_points(stride) > kLogHolderCellCap) stride *= 2;
  const std::size_t dims = (M + stride - 1) / stride;
  std::vector<double> sub;
  sub.reserve(lattice_points(stride));
  const auto v = g.values();
  if (gr.n == 1) {
    for (std::size_t i = 0; i < M; i += stride) sub.push_back(v[i]);
  } else {
    for (std::size_t i = 0; i < M; i += stride)
      for (std::size_t j = 0; j < M; j += stride) sub.push_back(v[i * M + j]);
  }
  LogHolderEstimate est;
  est.c_local = lattice_c_local(sub, gr.n, dims, gr.cell_side() * static_cast<double>(stride));
  // On a subsample, nearest-neighbour pairs of the full grid are still exact.
  if (stride > 1) est.c_local = std::max(est.c_local, neighbour_c_local(g));
  if (g_infinity) {
    double c = 0.0;
    for (std::size_t cell = 0; cell < gr.cell_count(); ++cell) {
      const auto x = gr.cell_center(cell);
      const double r = gr.n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
      c = std::max(c, std::abs(v[cell] - *g_infinity) * std::log(std::numbers::e + r));
    }
    est.c_decay = c;
  }
  return est;
}

ExponentField conjugate_exponent(const ExponentField& p) {
  if (p.inf() < 1.0) throw ClassViolation("conjugate_exponent: p^- < 1");
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = p[i];
    if (x == kInfinity)
      v[i] = 1.0;
    else if (x == 1.0)
      v[i] = kInfinity;
    else
      v[i] = x / (x - 1.0);
  }
  ExponentField q(p.grid(), std::move(v));
  if (auto lim = p.limit_at_infinity()) {
    if (*lim == 1.0)
      q.set_limit_at_infinity(kInfinity);
    else if (*lim > 1.0)
      q.set_limit_at_infinity(*lim / (*lim - 1.0));
  }
  if (const auto& cert = p.certificate()) {
    // 1/q = 1 - 1/p has the same log-Holder constants as 1/p.
    ClassReport r = *cert;
    r.p_minus = q.inf();
    r.p_plus = q.sup();
    r.in_P0 = r.p_minus > 0.0;
    r.in_P = r.p_minus >= 1.0;
    r.plog = r.in_P && r.log_holder;
    q.certify(r);
  }
  return q;
}

ClassReport classify(const ExponentField& p, std::optional<double> g_infinity) {
  ClassReport r;
  r.p_minus = p.inf();
  r.p_plus = p.sup();
  r.in_P0 = r.p_minus > 0.0;
  r.in_P = r.p_minus >= 1.0;
  if (!r.in_P0 || p.grid().cell_count() < 2) {
    r.log_holder = false;
    r.plog = false;
    return r;
  }
  const ExponentField recip = p.reciprocal();
  std::optional<double> recip_inf;
  if (g_infinity) recip_inf = *g_infinity == kInfinity ? 0.0 : 1.0 / *g_infinity;
  const auto est = estimate_log_holder_constants(recip, recip_inf);
  r.c_local_recip = est.c_local;
  r.c_decay_recip = est.c_decay;
  r.log_holder = true;

  if (const auto& preset = p.preset()) {
    const Grid& g = p.grid();
    const int l0 = std::max(1, (g.n == 1 ? 9 : 4) - g.J);
    for (int k = 0; k < 3; ++k) {
      Grid fine{g.n, g.J, l0 + k, 0, 2};
      std::vector<double> v(fine.cell_count());
      for (std::size_t c = 0; c < v.size(); ++c) {
        const double x = preset->evaluate(fine.cell_center(c), fine.n);
        v[c] = x == kInfinity ? 0.0 : 1.0 / x;
      }
      r.refinement_constants[k] =
          estimate_log_holder_constants(ExponentField(fine, std::move(v))).c_local;
    }
    const double d1 = r.refinement_constants[1] - r.refinement_constants[0];
    const double d2 = r.refinement_constants[2] - r.refinement_constants[1];
    r.refinement_checked = true;
    // A jump adds a fixed amount per halving of the cell side; smooth profiles converge.
    r.violated_at_refinement = d1 > 1e-9 && d2 >= 0.75 * d1;
    if (r.violated_at_refinement) r.log_holder = false;
  }
  r.plog = r.in_P && r.log_holder;
  return r;
}

}  // namespace vtl
