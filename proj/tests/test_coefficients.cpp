#include <doctest.h>

#include <cmath>

#include "rcdlab/coefficients.hpp"
#include "rcdlab/error.hpp"
#include "support.hpp"

using namespace rcdlab;

TEST_CASE("BG coefficients") {
  const auto tiny = bg_bound(1.0, {1e-9, 3.0});
  CHECK(std::abs(tiny.c2 - 1.5) <= 1e-6);
  CHECK(std::abs(tiny.c1 - 1.0) <= 1e-9);
  const auto zero = bg_bound(0.5, {0.0, 1.0});
  CHECK(zero.c1 == 1.0);
  CHECK(zero.c2 == 1.0);
  const auto b = bg_bound(1.0, {2.0, 4.0});
  CHECK(b.c2 * (1 - std::exp(-4.0 / 3)) == doctest::Approx(4.0 * 2.0 / 3 * std::exp(-8.0 / 3)).epsilon(1e-14));
  CHECK(b.c1 == doctest::Approx(std::exp(-4.0 / 3)).epsilon(1e-15));
  CHECK_THROWS_AS(bg_bound(0.0, {1.0, 2.0}), Error);
}

TEST_CASE("property: series branch agrees with the closed form across the threshold") {
  // Long-double evaluation of the closed form serves as the oracle.
  testing::Gen g(8);
  for (int k = 0; k < 200; ++k) {
    const double N = g.uniform(1, 6), T = g.uniform(0.1, 3);
    const double K = (g.uniform(0, 1) < 0.5 ? -1 : 1) * std::pow(10.0, g.uniform(-12, -3)) / T;
    const long double x = 2.0L * K * T / 3.0L;
    const long double c2 = (long double)N * K / 3.0L * std::exp(-2.0L * x) / -std::expm1(-x);
    const auto b = bg_bound(T, {K, N});
    CHECK(std::abs(b.c2 - (double)c2) <= 1e-12 * (double)std::abs(c2));
    const long double y = 2.0L * K * T;
    const long double eks = 4.0L * K * T * T / (N * std::expm1(y));
    CHECK(std::abs(eks_coefficient(T, {K, N}) - (double)eks) <= 1e-12 * (double)eks);
  }
}

TEST_CASE("limits as K tends to zero") {
  for (double K : {1e-8, -1e-8, 1e-10, 0.0}) {
    const CurvatureDimension cd{K, 2.0};
    const auto b = bg_bound(0.8, cd);
    CHECK(std::abs(b.c1 - 1.0) <= 1e-6);
    CHECK(std::abs(b.c2 - 2.0 / 1.6) <= 1e-6);
    CHECK(std::abs(harnack_prefactor(0.5, 1.0, cd) - 0.5) <= 1e-6);
    CHECK(std::abs(eks_coefficient(1.0, cd) - 1.0) <= 1e-6);
  }
  CHECK(eks_coefficient(1.0, {0.0, 2.0}) == 1.0);
  CHECK(harnack_prefactor(0.5, 1.0, {0.0, 1.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(harnack_log_ratio(0.5, 1.0, {0.0, 3.0}) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("constants") {
  CHECK(li_yau_constant(0.5, 1.0) == 1.0);
  CHECK(bakry_qian_constant({1.0, 2.0}) == 0.5);
  double prev = INFINITY;
  for (double T = 0.1; T < 5; T += 0.1) {
    const double c = li_yau_constant(T, 2.0);
    CHECK(c < prev);
    prev = c;
  }
  CHECK_THROWS_AS(li_yau_constant(0.0, 1.0), Error);
}

TEST_CASE("Harnack ratios and distance scale") {
  const CurvatureDimension cd{1.0, 2.0};
  const double s = 0.5, t = 1.0;
  const double direct = std::log((1 - std::exp(2.0 / 3 * t)) / (1 - std::exp(2.0 / 3 * s)));
  CHECK(harnack_log_ratio(s, t, cd) == doctest::Approx(direct).epsilon(1e-14));
  const double integral = std::log((1 - std::exp(-2.0 / 3 * t)) / (1 - std::exp(-2.0 / 3 * s)));
  CHECK(harnack_log_ratio_integral(s, t, cd) == doctest::Approx(integral).epsilon(1e-14));
  // The integral form is the quadrature of (t−s)(NK/3)∫₀¹ e^{−2Kσ/3}/(1 − e^{−2Kσ/3}) dτ, σ = t + τ(s − t).
  double q = 0.0;
  const int m = 20000;
  for (int k = 0; k < m; ++k) {
    const double tau = (k + 0.5) / m;
    const double sigma = t + tau * (s - t);
    q += std::exp(-2 * sigma / 3) / (1 - std::exp(-2 * sigma / 3));
  }
  q *= (t - s) * (2.0 / 3) / m;
  CHECK(q == doctest::Approx(harnack_log_ratio_integral(s, t, cd)).epsilon(1e-8));
  CHECK(harnack_distance_scale(s, t, 1.0) == doctest::Approx(4 * 0.5 * std::exp(2.0 / 3 * s)).epsilon(1e-15));
  CHECK(harnack_distance_scale(s, t, -1.0) == doctest::Approx(4 * 0.5 * std::exp(-2.0 / 3 * t)).epsilon(1e-15));
  CHECK(harnack_distance_scale(s, t, 0.0) == 2.0);
  CHECK_THROWS_AS(harnack_log_ratio(1.0, 1.0, cd), Error);
  CHECK_THROWS_AS(harnack_distance_scale(0.0, 1.0, 0.0), Error);
}
