#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace vtl::detail {

namespace {

struct PlanCache {
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

fftw_plan plan_for(const Grid& grid, int sign) {
  static PlanCache cache;
  const auto key = std::make_tuple(grid.n, grid.cells_per_axis(), sign);
  auto it = cache.plans.find(key);
  if (it != cache.plans.end()) return it->second;
  const int m = static_cast<int>(grid.cells_per_axis());
  std::vector<Complex> scratch(grid.cell_count());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = grid.n == 1 ? fftw_plan_dft_1d(m, buf, buf, sign, flags)
                               : fftw_plan_dft_2d(m, m, buf, buf, sign, flags);
  cache.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_forward(std::span<Complex> data, const Grid& grid) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(grid, FFTW_FORWARD), buf, buf);
}

void fft_inverse(std::span<Complex> data, const Grid& grid) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(grid, FFTW_BACKWARD), buf, buf);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (Complex& z : data) z *= scale;
}

std::vector<long> axis_offsets(const Grid& grid) {
  const long m = static_cast<long>(grid.cells_per_axis());
  std::vector<long> k(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) k[static_cast<std::size_t>(i)] = i < m / 2 ? i : i - m;
  return k;
}

std::vector<double> axis_frequencies(const Grid& grid) {
  const auto k = axis_offsets(grid);
  const double T = std::ldexp(1.0, grid.J + 1);
  std::vector<double> xi(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    xi[i] = 2.0 * std::numbers::pi * static_cast<double>(k[i]) / T;
  return xi;
}

}  // namespace vtl::detail
