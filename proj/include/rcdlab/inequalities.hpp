#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rcdlab/calculus.hpp"
#include "rcdlab/coefficients.hpp"
#include "rcdlab/heat.hpp"
#include "rcdlab/report.hpp"
#include "rcdlab/space.hpp"

namespace rcdlab {

/// f + ε with ε = 1e-12·max(‖f‖∞, 1). Throws ErrorCode::Precondition when f
/// has a negative entry.
ScalarField regularize(const ScalarField& f);

/// Margin (N/2T)u² + u Δu − Γ(u), u = H_T f_ε, asserted on interior nodes.
/// Diagnostic "log_form_min_margin": min of N/2T − (Γ(u)/u² − Δu/u).
InequalityReport li_yau_check(const SpectralSolver& solver, const ScalarField& f, double T, double N,
                              double tolerance = 1e-6);

/// Margin (NK/4)u − Δu. For T < 2/K the report is labeled
/// outside-proof-regime and carries its margins without a verdict.
InequalityReport bakry_qian_check(const SpectralSolver& solver, const ScalarField& f, double T,
                                  const CurvatureDimension& cd, double tolerance = 1e-6);

/// Margin c1 u Δu + c2 u² − Γ(u) with (c1, c2) = bg_bound(T, cd).
InequalityReport baudoin_garofalo_check(const SpectralSolver& solver, const ScalarField& f,
                                        double T, const CurvatureDimension& cd,
                                        double tolerance = 1e-6);

/// One Harnack instance: margin H_t f(y) − H_s f(x) e^{−d²/scale} · prefactor.
InequalityReport harnack_check(const SpectralSolver& solver, const ScalarField& f, std::size_t x,
                               std::size_t y, double s, double t, const CurvatureDimension& cd,
                               double tolerance = 1e-6);

/// All (x, y) pairs × all (s, t) with s < t; one margin entry per instance,
/// in pair-major order. Coordinates hold the instance index.
InequalityReport harnack_scan(const SpectralSolver& solver, const ScalarField& f,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                              const std::vector<std::pair<double, double>>& times,
                              const CurvatureDimension& cd, double tolerance = 1e-6);

/// Margin e^{−2Kt} H_t Γ(f) − Γ(H_t f) on interior nodes.
InequalityReport be_flow_check(const SpectralSolver& solver, const ScalarField& f, double t,
                               const CurvatureDimension& cd, double tolerance = 1e-6);

/// Margin e^{−2Kt} H_t Γ(f) − Γ(H_t f) − eks_coefficient(t)·(ΔH_t f)².
InequalityReport eks_check(const SpectralSolver& solver, const ScalarField& f, double t,
                           const CurvatureDimension& cd, double tolerance = 1e-6);

/// Pointwise Bochner slack γ₂(f) − KΓ(f) − (Δf)²/N, asserted on interior nodes.
InequalityReport bochner_check(const ModelSpace& space, const ScalarField& f,
                               const CurvatureDimension& cd, double tolerance = 1e-6);

/// Φ(t) = H_t(u Γ(log u)), u = H_{T−t} f, for t ∈ [0, T). Requires
/// min f ≥ 1e-6·‖f‖∞ > 0.
ScalarField phi(const SpectralSolver& solver, const ScalarField& f, double T, double t);

/// ∫ Φ(t) φ dm.
double phi_integral(const SpectralSolver& solver, const ScalarField& f, double T, double t,
                    const ScalarField& weight);

/// Exact time derivative of the discrete ∫ Φ(t) φ dm (spectral in time).
double phi_integral_derivative(const SpectralSolver& solver, const ScalarField& f, double T,
                               double t, const ScalarField& weight);

/// 2 ∫ u H_t φ γ₂(log u) dm, u = H_{T−t} f.
double phi_identity_rhs(const SpectralSolver& solver, const ScalarField& f, double T, double t,
                        const ScalarField& weight);

struct PhiDerivativeDefect {
  double central = 0.0;   ///< central difference of ∫Φφ with step δt
  double exact = 0.0;     ///< phi_integral_derivative
  double identity = 0.0;  ///< phi_identity_rhs
  double defect = 0.0;    ///< |central − identity|
  double stencil = 0.0;   ///< |central − exact|, the O(δt²) part
  double floor = 0.0;     ///< |exact − identity|, the O(h²) part
};

PhiDerivativeDefect phi_derivative_check(const SpectralSolver& solver, const ScalarField& f,
                                         double T, double t, const ScalarField& weight, double dt);

/// a(t) ≥ 0, its derivative, and γ(t).
struct TimeProfile {
  std::string name;
  std::function<double(double)> a;
  std::function<double(double)> da;
  std::function<double(double)> gamma;
};

/// a(t) = (1 − t/T)², γ(t) = (N/4)(a′/a + 2K) so that a′ − 4aγ/N + 2Ka ≡ 0.
TimeProfile quadratic_defgamma_profile(double T, const CurvatureDimension& cd);

/// Margin per grid time: central difference of a(t)∫Φ(t)φ minus
///   ∫ [(a′ − 4aγ/N + 2Ka)Φ + (4aγ/N)ΔH_T f − (2aγ²/N)H_T f] φ dm.
InequalityReport prop2_check(const SpectralSolver& solver, const ScalarField& f, double T,
                             const TimeProfile& profile, const ScalarField& weight,
                             const std::vector<double>& times, double dt,
                             const CurvatureDimension& cd, double tolerance = 1e-4);

/// V on [0, T] with V(0) = 1, V(T) = 0, V ≥ 0, together with ∫V² and ∫V′².
class VProfile {
 public:
  VProfile(std::string name, double T, std::function<double(double)> value,
           std::function<double(double)> derivative);

  const std::string& name() const noexcept { return name_; }
  double horizon() const noexcept { return T_; }
  double value(double tau) const { return value_(tau); }
  double derivative(double tau) const { return derivative_(tau); }
  double integral_sq() const noexcept { return int_sq_; }
  double integral_dsq() const noexcept { return int_dsq_; }

 private:
  std::string name_;
  double T_;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  double int_sq_ = 0.0;
  double int_dsq_ = 0.0;
};

/// V(τ) = 1 − τ/T.
VProfile v_linear(double T);
/// V(τ) = e^{−Kτ/3}(e^{−2Kτ/3} − e^{−2KT/3}) / (1 − e^{−2KT/3}); v_linear at K = 0.
VProfile v_bg(double T, double K);

/// Coefficients of the V-form bound
///   Γ(log u) + (2K∫V² − 1) Δu/u ≤ (N/2)(∫V′² − K + K²∫V²).
struct PreLiYauCoefficients {
  double laplacian = 0.0;  ///< 2K∫V² − 1
  double constant = 0.0;   ///< (N/2)(∫V′² − K + K²∫V²)
};

PreLiYauCoefficients pre_li_yau_coefficients(const VProfile& V, const CurvatureDimension& cd);

/// Margin u²·(constant − Γ(u)/u² − laplacian·Δu/u) = constant·u² − Γ(u) −
/// laplacian·uΔu, u = H_T f_ε; identical to li_yau_check at K = 0 with v_linear.
InequalityReport pre_li_yau_check(const SpectralSolver& solver, const ScalarField& f, double T,
                                  const VProfile& V, const CurvatureDimension& cd,
                                  double tolerance = 1e-6);

/// Heat-kernel versions of the four estimates at base node x. The density
/// H_{t₀}δ_x with warm-up t₀ = 5h² is fed to the verifiers at time t − t₀,
/// while the coefficients use the full time t. Items: li-yau (K = 0),
/// bakry-qian (K > 0), baudoin-garofalo (all K), harnack (s = t/2 over a
/// set of node pairs, all K).
std::vector<InequalityReport> kernel_corollary_suite(const SpectralSolver& solver, std::size_t x,
                                                     const CurvatureDimension& cd,
                                                     const std::vector<double>& times,
                                                     double tolerance = 1e-5);

/// Warm-up time 5h² used by kernel_corollary_suite.
double kernel_warmup_time(const ModelSpace& space);

}  // namespace rcdlab
