#pragma once

#include <cstdint>
#include <vector>

#include "rcdlab/calculus.hpp"

namespace rcdlab {

/// offset + amplitude·cos(frequency·x + phase).
ScalarField cosine_field(SpacePtr space, double amplitude, double frequency, double phase, double offset);

/// offset + height·exp(−d(x, center)² / (2 width²)), d the geodesic distance
/// between coordinates (wrapped on the circle).
ScalarField gaussian_bump(SpacePtr space, double center, double width, double height, double offset);

/// Piecewise-linear interpolation of (xs, values) at the node coordinates;
/// constant extension outside [xs.front(), xs.back()].
ScalarField tabulated_field(SpacePtr space, const std::vector<double>& xs, const std::vector<double>& values);

/// Smooth nonnegative random field: a few low Fourier modes with decaying
/// random amplitudes, shifted so that its minimum equals `floor`. Modes are
/// periodic on the circle and cosine (Neumann) modes on intervals.
ScalarField random_smooth_field(SpacePtr space, std::uint64_t seed, int modes = 4, double floor = 0.1);

}  // namespace rcdlab
