#include "rcdlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rcdlab/error.hpp"

namespace rcdlab {

ScalarField cosine_field(SpacePtr space, double amplitude, double frequency, double phase, double offset) {
  return ScalarField::sample(std::move(space), [=](double x) {
    return offset + amplitude * std::cos(frequency * x + phase);
  });
}

ScalarField gaussian_bump(SpacePtr space, double center, double width, double height, double offset) {
  require(width > 0.0, ErrorCode::InvalidParameter, "gaussian bump width must be positive");
  const bool periodic = space->periodic();
  const double period = space->period();
  return ScalarField::sample(std::move(space), [=](double x) {
    double d = std::abs(x - center);
    if (periodic) {
      d = std::fmod(d, period);
      d = std::min(d, period - d);
    }
    return offset + height * std::exp(-d * d / (2.0 * width * width));
  });
}

ScalarField tabulated_field(SpacePtr space, const std::vector<double>& xs, const std::vector<double>& values) {
  require(!xs.empty() && xs.size() == values.size(), ErrorCode::InvalidParameter,
          "tabulated field needs matching, nonempty abscissae and values");
  require(std::is_sorted(xs.begin(), xs.end()), ErrorCode::InvalidParameter,
          "tabulated field abscissae must be sorted");
  return ScalarField::sample(std::move(space), [&](double x) {
    if (x <= xs.front()) return values.front();
    if (x >= xs.back()) return values.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
  });
}

ScalarField random_smooth_field(SpacePtr space, std::uint64_t seed, int modes, double floor) {
  require(modes >= 1, ErrorCode::InvalidParameter, "random field needs at least one mode");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(modes));
  std::vector<double> b(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) {
    a[static_cast<std::size_t>(k)] = unit(rng);
    b[static_cast<std::size_t>(k)] = unit(rng);
  }
  const auto& nodes = space->nodes();
  // Cosines about the pole keep fields smooth as radial functions; the
  // hyperbolic model's first node sits one step away from it.
  const double x0 = space->profile() == WeightProfile::Sinh ? 0.0 : nodes.front();
  const bool periodic = space->periodic();
  const double omega = periodic ? 2.0 * std::numbers::pi / space->period()
                                : std::numbers::pi / (nodes.back() - x0);
  ScalarField f = ScalarField::sample(space, [&](double x) {
    double v = 0.0;
    for (int k = 1; k <= modes; ++k) {
      const double decay = 1.0 / (k * k);
      const double arg = k * omega * (x - x0);
      const auto i = static_cast<std::size_t>(k - 1);
      v += decay * a[i] * std::cos(arg);
      if (periodic) v += decay * b[i] * std::sin(arg);
    }
    return v;
  });
  const double shift = floor - f.min();
  for (double& v : f.values()) v += shift;
  return f;
}

}  // namespace rcdlab
