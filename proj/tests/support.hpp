// Hand-rolled generators and small numeric helpers shared by the unit tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "rcdlab/calculus.hpp"
#include "rcdlab/space.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::vector<double> values(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  /// Nonnegative weights on `atoms` distinct random nodes of an n-node grid.
  std::vector<double> sparse_masses(std::size_t n, std::size_t atoms) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng_);
    std::vector<double> m(n, 0.0);
    for (std::size_t k = 0; k < atoms; ++k) m[idx[k]] = uniform(0.1, 1.0);
    return m;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Smooth positive field built from a handful of random low modes.
inline rcdlab::ScalarField smooth_field(const rcdlab::SpacePtr& space, Gen& g, double floor = 0.5) {
  const double a = g.uniform(-1, 1), b = g.uniform(-1, 1), c = g.uniform(-0.5, 0.5);
  const double p = g.uniform(0, 2 * kPi);
  const double L = space->periodic() ? space->period() : space->nodes().back() - space->nodes().front();
  const double x0 = space->nodes().front();
  const double w = space->periodic() ? 2 * kPi / L : kPi / L;
  auto f = rcdlab::ScalarField::sample(space, [&](double x) {
    const double y = w * (x - x0);
    return a * std::cos(y) + b * std::cos(2 * y + (space->periodic() ? p : 0.0)) + c * std::cos(3 * y);
  });
  const double lo = f.min();
  for (auto& v : f.values()) v += floor - lo;
  return f;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Max over interior nodes (≥ 2 steps from interval ends) of |a_i − b_i|.
inline double interior_max_diff(const rcdlab::ModelSpace& space, const std::vector<double>& a,
                                const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (space.is_interior(i)) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline std::vector<rcdlab::SpacePtr> all_models(std::size_t n) {
  return {rcdlab::build_interval(n, kPi), rcdlab::build_circle(n, 2 * kPi), rcdlab::build_sphere_model(n, 2.0),
          rcdlab::build_hyperbolic_model(n, 2.0, 1.0)};
}

}  // namespace testing
