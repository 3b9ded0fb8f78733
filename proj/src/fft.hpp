#pragma once

#include <span>
#include <vector>

#include "vtl/grid_function.hpp"

namespace vtl::detail {

/// Unnormalised forward DFT over all axes of the grid (sign -1).
void fft_forward(std::span<Complex> data, const Grid& grid);
/// Inverse DFT including the 1/N factor.
void fft_inverse(std::span<Complex> data, const Grid& grid);

/// Angular frequency 2 pi k' / T of each DFT index along one axis, with
/// k' the signed index and T = 2^(J+1) the box side.
std::vector<double> axis_frequencies(const Grid& grid);

/// Signed minimum-image offset of each index along one axis.
std::vector<long> axis_offsets(const Grid& grid);

}  // namespace vtl::detail
