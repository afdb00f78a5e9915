#include "rcdlab/coefficients.hpp"

#include <cmath>

#include "rcdlab/error.hpp"

namespace rcdlab {

namespace {

// log((e^{ct} − 1) / (e^{cs} − 1)) for 0 < s < t.
double log_expm1_ratio(double s, double t, double c) {
  if (c == 0.0) return std::log(t / s);
  if (std::abs(c) * t < kSeriesThreshold) {
    // (e^z − 1)/z = 1 + z/2 + z²/6 + z³/24 + O(z⁴)
    const auto g = [](double z) { return z / 2.0 + z * z / 6.0 + z * z * z / 24.0; };
    return std::log(t / s) + std::log1p(g(c * t)) - std::log1p(g(c * s));
  }
  return std::log(std::expm1(c * t) / std::expm1(c * s));
}

void check_times(double s, double t) {
  require(s > 0.0 && t > s && std::isfinite(t), ErrorCode::Domain, "need 0 < s < t");
}

}  // namespace

BgBound bg_bound(double T, const CurvatureDimension& cd) {
  require(T > 0.0 && std::isfinite(T), ErrorCode::Domain, "bg_bound needs T > 0");
  const double x = 2.0 * cd.K * T / 3.0;
  BgBound b;
  b.c1 = std::exp(-x);
  if (cd.K == 0.0) {
    b.c2 = cd.N / (2.0 * T);
  } else if (std::abs(cd.K) * T < kSeriesThreshold) {
    // x / (1 − e^{−x}) = 1 + x/2 + x²/12 + O(x⁴)
    b.c2 = cd.N / (2.0 * T) * std::exp(-2.0 * x) * (1.0 + x / 2.0 + x * x / 12.0);
  } else {
    b.c2 = cd.N * cd.K / 3.0 * std::exp(-2.0 * x) / -std::expm1(-x);
  }
  return b;
}

double li_yau_constant(double T, double N) {
  require(T > 0.0 && std::isfinite(T), ErrorCode::Domain, "Li-Yau constant needs T > 0");
  return N / (2.0 * T);
}

double bakry_qian_constant(const CurvatureDimension& cd) { return cd.N * cd.K / 4.0; }

double eks_coefficient(double t, const CurvatureDimension& cd) {
  require(t > 0.0 && std::isfinite(t), ErrorCode::Domain, "EKS coefficient needs t > 0");
  const double y = 2.0 * cd.K * t;
  double ratio = 1.0;  // y / (e^y − 1)
  if (cd.K == 0.0) {
    ratio = 1.0;
  } else if (std::abs(cd.K) * t < kSeriesThreshold) {
    ratio = 1.0 - y / 2.0 + y * y / 12.0;
  } else {
    ratio = y / std::expm1(y);
  }
  return 2.0 * t / cd.N * ratio;
}

double harnack_log_ratio(double s, double t, const CurvatureDimension& cd) {
  check_times(s, t);
  return 0.5 * cd.N * log_expm1_ratio(s, t, 2.0 * cd.K / 3.0);
}

double harnack_log_ratio_integral(double s, double t, const CurvatureDimension& cd) {
  check_times(s, t);
  return 0.5 * cd.N * log_expm1_ratio(s, t, -2.0 * cd.K / 3.0);
}

double harnack_prefactor(double s, double t, const CurvatureDimension& cd) {
  return std::exp(-harnack_log_ratio(s, t, cd));
}

double harnack_distance_scale(double s, double t, double K) {
  check_times(s, t);
  const double tau = K >= 0.0 ? s : t;
  return 4.0 * (t - s) * std::exp(2.0 * K * tau / 3.0);
}

}  // namespace rcdlab
