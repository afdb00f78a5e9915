#pragma once

#include "rcdlab/space.hpp"

namespace rcdlab {

/// Below this value of |K|·time the exponential ratios are evaluated by
/// truncated series instead of closed forms.
constexpr double kSeriesThreshold = 1e-4;

/// Coefficients of the Baudoin-Garofalo bound
///   Γ(H_T f) ≤ c1 (ΔH_T f) H_T f + c2 (H_T f)²,
/// c1 = e^{−2KT/3}, c2 = (NK/3) e^{−4KT/3} / (1 − e^{−2KT/3}).
struct BgBound {
  double c1 = 1.0;
  double c2 = 0.0;
};

BgBound bg_bound(double T, const CurvatureDimension& cd);

/// Li-Yau constant N/(2T).
double li_yau_constant(double T, double N);

/// Bakry-Qian constant NK/4.
double bakry_qian_constant(const CurvatureDimension& cd);

/// 4Kt² / (N(e^{2Kt} − 1)); 2t/N at K = 0.
double eks_coefficient(double t, const CurvatureDimension& cd);

/// (N/2) log((1 − e^{2Kt/3}) / (1 − e^{2Ks/3})); (N/2) log(t/s) at K = 0.
double harnack_log_ratio(double s, double t, const CurvatureDimension& cd);

/// (N/2) log((1 − e^{−2Kt/3}) / (1 − e^{−2Ks/3})): the closed form of
/// (t−s)(NK/3)∫₀¹ e^{−2Kσ/3}/(1 − e^{−2Kσ/3}) dτ with σ = t + τ(s − t).
double harnack_log_ratio_integral(double s, double t, const CurvatureDimension& cd);

/// ((1 − e^{2Ks/3}) / (1 − e^{2Kt/3}))^{N/2} = exp(−harnack_log_ratio).
double harnack_prefactor(double s, double t, const CurvatureDimension& cd);

/// 4(t − s) e^{2Kτ/3} with τ = s for K ≥ 0 and τ = t for K < 0.
double harnack_distance_scale(double s, double t, double K);

}  // namespace rcdlab
