#include "vtl/phi_system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "vtl/error.hpp"
#include "vtl/numeric.hpp"

namespace vtl {

namespace {

double glue(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

std::vector<double> dft_radii(const Grid& g) {
  const auto xi = detail::axis_frequencies(g);
  std::vector<double> r(g.cell_count());
  for (std::size_t c = 0; c < r.size(); ++c) {
    const auto idx = g.unravel(c);
    r[c] = g.n == 1 ? std::abs(xi[idx[0]]) : std::hypot(xi[idx[0]], xi[idx[1]]);
  }
  return r;
}

// exp(sign * i * (xi_0 + ... ) * h / 2): moves samples between cell centres and corners.
std::vector<Complex> half_cell_phase(const Grid& g, double sign) {
  const auto xi = detail::axis_frequencies(g);
  const double h = g.cell_side();
  std::vector<Complex> out(g.cell_count());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto idx = g.unravel(c);
    double s = xi[idx[0]];
    if (g.n == 2) s += xi[idx[1]];
    out[c] = std::polar(1.0, sign * s * h / 2.0);
  }
  return out;
}

// Cell index of the lower-left corner of each level-v cube, in slot order.
std::vector<std::size_t> corner_cells(const Grid& g, int v) {
  const std::size_t k = static_cast<std::size_t>(cubes_per_axis(g, v));
  const std::size_t step = std::size_t{1} << (g.L - v);
  std::vector<std::size_t> out;
  out.reserve(cubes_at_level(g, v));
  if (g.n == 1) {
    for (std::size_t a = 0; a < k; ++a) out.push_back(a * step);
  } else {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) out.push_back(g.ravel({a * step, b * step}));
  }
  return out;
}

void check_system_grid(const GridFunction& f, const PhiSystem& sys) {
  if (!(f.grid() == sys.grid)) throw InputError("phi system and function live on different grids");
}

}  // namespace

double cutoff(double r) { return 1.0 - glue(r - 1.0); }

double partition_weight(int v, double r) {
  if (v == 0) return cutoff(r);
  return cutoff(std::ldexp(r, -v)) - cutoff(std::ldexp(r, 1 - v));
}

double Phi_hat(double r) { return std::sqrt(cutoff(r)); }

double phi_hat(double r) { return std::sqrt(std::max(0.0, cutoff(r) - cutoff(2.0 * r))); }

double level_filter(int v, double r) { return v == 0 ? Phi_hat(r) : phi_hat(std::ldexp(r, -v)); }

bool PhiCertificate::passes(double tol) const {
  return supports_exact && calderon_residual <= tol && phi0_lower > 0.0 && phi_lower > 0.0 &&
         moment_max == 0.0 && d_min >= 1e-6;
}

std::vector<std::vector<double>> build_partition(const Grid& grid) {
  if (grid.V_max < 1) throw PreconditionError("build_partition: need V_max >= 1");
  const auto r = dft_radii(grid);
  std::vector<std::vector<double>> out;
  for (int v = 0; v <= grid.V_max; ++v) {
    std::vector<double> w(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = partition_weight(v, r[i]);
    out.push_back(std::move(w));
  }
  return out;
}

PhiSystem build_fj_system(int n, int J, int L, int V_max, double samples_per_unit) {
  if (L < V_max + 2)
    throw ResolutionError("phi system: L=" + std::to_string(L) + " too small for V_max=" +
                          std::to_string(V_max) + " (need V_max + 2 <= L)");
  return build_fj_system(Grid::make(n, J, L, V_max), samples_per_unit);
}

PhiSystem build_fj_system(const Grid& grid, double samples_per_unit) {
  if (grid.V_max < 1) throw PreconditionError("phi system: need V_max >= 1");
  if (!(samples_per_unit >= 8.0))
    throw ResolutionError("phi system: fewer than 8 certification samples across [1,2]");
  const double top = std::ldexp(1.0, grid.V_max + 1);
  if (top > std::numbers::pi * std::ldexp(1.0, grid.L))
    throw ResolutionError("phi system: top band exceeds the grid Nyquist frequency");

  PhiSystem sys;
  sys.grid = grid;
  sys.radius = dft_radii(grid);
  sys.partition = build_partition(grid);
  const int V = grid.V_max;
  // D(eta) = |F Phi|^2 + sum_{j=1..V} |F phi(2^-j eta)|^2, truncated at V.
  const auto D = [&](double r) {
    CompensatedSum s;
    s += Phi_hat(r) * Phi_hat(r);
    for (int j = 1; j <= V; ++j) {
      const double x = phi_hat(std::ldexp(r, -j));
      s += x * x;
    }
    return s.value();
  };
  const auto Psi_hat = [&](double r) {
    const double a = Phi_hat(r);
    return a == 0.0 ? 0.0 : a / D(r);
  };
  const auto psi_hat = [&](double r) {
    const double a = phi_hat(r);
    return a == 0.0 ? 0.0 : a / D(r);
  };

  const std::size_t N = sys.radius.size();
  sys.Phi.resize(N);
  sys.phi.resize(N);
  sys.Psi.resize(N);
  sys.psi.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = sys.radius[i];
    sys.Phi[i] = Phi_hat(r);
    sys.phi[i] = phi_hat(r);
    sys.Psi[i] = Psi_hat(r);
    sys.psi[i] = psi_hat(r);
  }

  for (int v = 0; v <= V; ++v) {
    std::vector<double> a(N), b(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double r = v == 0 ? sys.radius[i] : std::ldexp(sys.radius[i], -v);
      a[i] = v == 0 ? Phi_hat(r) : phi_hat(r);
      b[i] = v == 0 ? Psi_hat(r) : psi_hat(r);
    }
    sys.analysis.push_back(std::move(a));
    sys.synthesis.push_back(std::move(b));
  }

  PhiCertificate& cert = sys.certificate;
  cert.cutoff = "exp-glue: Psi(r) = 1 - s(r - 1), s(t) = e^(-1/t) / (e^(-1/t) + e^(-1/(1-t)))";
  cert.samples_per_unit = samples_per_unit;
  cert.phi0_lower = kInfinity;
  cert.phi_lower = kInfinity;
  cert.d_min = kInfinity;
  cert.supports_exact = true;
  const double band = std::ldexp(1.0, V);

  const auto visit = [&](double r) {
    const double P0 = Phi_hat(r), p1 = phi_hat(r);
    if (r <= 5.0 / 3.0) cert.phi0_lower = std::min(cert.phi0_lower, std::abs(P0));
    if (r >= 3.0 / 5.0 && r <= 5.0 / 3.0) cert.phi_lower = std::min(cert.phi_lower, std::abs(p1));
    if (r <= 2.0) cert.d_min = std::min(cert.d_min, D(r));
    if (r >= 2.0 && (P0 != 0.0 || Psi_hat(r) != 0.0)) cert.supports_exact = false;
    if ((r <= 0.5 || r >= 2.0) && (p1 != 0.0 || psi_hat(r) != 0.0)) cert.supports_exact = false;
    if (r < 0.5) cert.moment_max = std::max(cert.moment_max, std::abs(p1));
    if (r <= band) {
      CompensatedSum cal, part;
      cal += P0 * Psi_hat(r);
      for (int j = 1; j <= V; ++j) {
        const double x = std::ldexp(r, -j);
        cal += phi_hat(x) * psi_hat(x);
      }
      for (int v = 0; v <= V; ++v) part += partition_weight(v, r);
      cert.calderon_residual = std::max(cert.calderon_residual, std::abs(cal.value() - 1.0));
      cert.partition_residual = std::max(cert.partition_residual, std::abs(part.value() - 1.0));
    }
  };
  const auto samples = static_cast<std::size_t>(std::ceil(top * samples_per_unit));
  for (std::size_t k = 0; k <= samples; ++k) visit(static_cast<double>(k) / samples_per_unit);
  for (double r : sys.radius) visit(r);

  cert.dft_spacing = 2.0 * std::numbers::pi / std::ldexp(1.0, grid.J + 1);
  cert.dft_transition_samples = static_cast<std::size_t>(
      std::count_if(sys.radius.begin(), sys.radius.end(), [](double r) { return r > 1.0 && r < 2.0; }));
  if (cert.d_min < 1e-6) throw ConstructionError("phi system: D below 1e-6 on the filter supports");
  return sys;
}

FunctionSequence lp_decompose(const GridFunction& f, const PhiSystem& sys) {
  check_system_grid(f, sys);
  const Grid& g = sys.grid;
  std::vector<Complex> F(f.values().begin(), f.values().end());
  detail::fft_forward(F, g);
  FunctionSequence out;
  out.v_start = 0;
  for (int v = 0; v <= g.V_max; ++v) {
    std::vector<Complex> G(F.size());
    const auto& w = sys.partition[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < F.size(); ++i) G[i] = F[i] * w[i];
    detail::fft_inverse(G, g);
    if (f.is_real())
      for (Complex& z : G) z = z.real();
    out.levels.emplace_back(g, std::move(G), f.is_real());
  }
  return out;
}

CoeffSequence analyze(const GridFunction& f, const PhiSystem& sys) {
  check_system_grid(f, sys);
  const Grid& g = sys.grid;
  std::vector<Complex> F(f.values().begin(), f.values().end());
  detail::fft_forward(F, g);
  const auto phase = half_cell_phase(g, -1.0);
  CoeffSequence out(g);
  std::vector<Complex> G(F.size());
  for (int v = 0; v <= g.V_max; ++v) {
    for (std::size_t i = 0; i < F.size(); ++i) G[i] = F[i] * (sys.analysis[static_cast<std::size_t>(v)][i] * phase[i]);
    detail::fft_inverse(G, g);
    const double scale = std::ldexp(1.0, -v * g.n);
    const double s = std::sqrt(scale);  // 2^{-vn/2}
    const auto corners = corner_cells(g, v);
    auto& lv = out.level(v);
    for (std::size_t k = 0; k < corners.size(); ++k) lv[k] = s * G[corners[k]];
  }
  return out;
}

GridFunction synthesize(const CoeffSequence& lambda, const PhiSystem& sys) {
  if (!(lambda.grid() == sys.grid)) throw InputError("phi system and coefficients on different grids");
  const Grid& g = sys.grid;
  const auto phase = half_cell_phase(g, 1.0);
  std::vector<Complex> acc(g.cell_count()), d(g.cell_count());
  const double inv_cell = 1.0 / g.cell_measure();
  for (int v = 0; v <= g.V_max; ++v) {
    std::fill(d.begin(), d.end(), Complex{});
    const double s = std::sqrt(std::ldexp(1.0, -v * g.n));
    const auto corners = corner_cells(g, v);
    const auto& lv = lambda.level(v);
    bool any = false;
    for (std::size_t k = 0; k < corners.size(); ++k) {
      d[corners[k]] = lv[k] * (s * inv_cell);
      any = any || lv[k] != Complex{};
    }
    if (!any) continue;
    detail::fft_forward(d, g);
    for (std::size_t i = 0; i < d.size(); ++i) acc[i] += d[i] * (sys.synthesis[static_cast<std::size_t>(v)][i] * phase[i]);
  }
  detail::fft_inverse(acc, g);
  return GridFunction(g, std::move(acc), false);
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw InputError("inner product: grid mismatch");
  CompensatedSum re, im;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const Complex z = f[c] * std::conj(g[c]);
    re += z.real();
    im += z.imag();
  }
  return Complex{re.value(), im.value()} * f.grid().cell_measure();
}

Complex coefficient_inner_product(const CoeffSequence& a, const CoeffSequence& b) {
  if (!(a.grid() == b.grid())) throw InputError("coefficient inner product: grid mismatch");
  CompensatedSum re, im;
  for (int v = 0; v <= a.max_level(); ++v) {
    const auto& x = a.level(v);
    const auto& y = b.level(v);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Complex z = x[i] * std::conj(y[i]);
      re += z.real();
      im += z.imag();
    }
  }
  return {re.value(), im.value()};
}

}  // namespace vtl
