#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rcdlab/calculus.hpp"
#include "rcdlab/heat.hpp"
#include "rcdlab/report.hpp"
#include "rcdlab/space.hpp"

namespace rcdlab {

/// Probability measure supported on the nodes of a ModelSpace.
class DiscreteMeasure {
 public:
  /// Normalizes `masses`; entries must be nonnegative with positive sum.
  DiscreteMeasure(SpacePtr space, std::vector<double> masses);
  /// μ = ρ m, normalized.
  static DiscreteMeasure from_density(const ScalarField& density);
  /// Unit mass at node i.
  static DiscreteMeasure dirac(SpacePtr space, std::size_t i);
  /// m restricted to the closed ball B_r(center), renormalized.
  static DiscreteMeasure uniform_ball(SpacePtr space, std::size_t center, double r);

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return masses_.size(); }
  double operator[](std::size_t i) const noexcept { return masses_[i]; }
  /// ρ_i = μ_i / m_i.
  double density(std::size_t i) const noexcept { return masses_[i] / space_->measure()[i]; }

 private:
  SpacePtr space_;
  std::vector<double> masses_;
};

/// A mass element of a coupling. `displacement` is the signed travel along
/// the chosen geodesic (on the circle it may cross the seam); |displacement|
/// equals d(source, target) for optimal couplings.
struct PlanCell {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
  double displacement = 0.0;
  /// Displacement in grid steps (an integer for every plan built here).
  long steps = 0;
};

struct TransportPlan {
  SpacePtr space;
  std::vector<PlanCell> cells;
  std::vector<double> source_marginal;
  std::vector<double> target_marginal;
  /// Σ π_ij d(i,j)².
  double cost = 0.0;

  /// Max deviation of the cell row/column sums from the stored marginals.
  double marginal_error() const;
};

/// Monotone (quantile) coupling; on the circle the best rotation of the
/// quantile coupling is selected over all atom breakpoints.
TransportPlan w2_quantile(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1);

/// Exact transportation-simplex solution for the squared-distance cost.
/// Refuses (ErrorCode::SizeGuard) when the combined support exceeds 400.
TransportPlan w2_lp(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1);

constexpr std::size_t kLpSupportLimit = 400;

struct InterpolationPath {
  std::vector<double> times;
  std::vector<DiscreteMeasure> slices;
  TransportPlan plan;
};

/// Each plan cell travels at constant speed along its geodesic; at time t its
/// mass is split linearly between the two nodes bracketing its position.
InterpolationPath displacement_interpolation(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                             const std::vector<double>& times);

/// Same, for an already computed plan.
DiscreteMeasure interpolate_plan(const TransportPlan& plan, double t);

/// Action of the constant-speed lift: Σ mass · displacement².
double plan_action(const InterpolationPath& path);

/// max over slices and nodes of μ_t,i / m_i.
double compression_bound(const InterpolationPath& path);

/// σ^{(t)}_{K,N}(θ); +∞ on the branch Kθ² ≥ Nπ².
double sigma_coefficient(double t, double theta, double K, double N);

struct CdStarResult {
  double margin = 0.0;   ///< RHS − LHS; ≥ −tolerance means the inequality holds
  bool vacuous = false;  ///< some coupled pair sits on the σ = +∞ branch
  double lhs = 0.0;      ///< −∫ ρ_t^{1−1/N'} dm
  double rhs = 0.0;      ///< −∫ σ ρ_0^{−1/N'} + σ ρ_1^{−1/N'} dπ
};

/// Rényi-entropy convexity along the quantile interpolation at time t.
CdStarResult cd_star_check(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, double t,
                           const CurvatureDimension& cd, double N_prime);

/// Parameters of a transport replay of the Harnack estimate.
struct HarnackTransportParams {
  std::size_t x = 0;  ///< endpoint ball B_r(x) carries μ₁ (evaluated at time s)
  std::size_t y = 0;  ///< start ball B_r(y) carries μ₀ (evaluated at time t)
  double s = 0.5;
  double t = 1.0;
  double r = 0.0;
  double tolerance = 1e-6;
};

/// Builds μ₀ ∝ m on B_r(y) and μ₁ ∝ m on B_r(x), couples them monotonically
/// and compares
///   ∫ log(u(γ₁, s) / u(γ₀, t)) dπ
/// with action / (4(t−s)e^{2K·τ/3}) + (N/2) log((1−e^{2Kt/3}) / (1−e^{2Ks/3})),
/// τ = s for K ≥ 0 and τ = t for K < 0, where u = H f_ε. Margin = RHS − LHS.
InequalityReport harnack_transport_check(const SpectralSolver& solver, const ScalarField& f,
                                         const HarnackTransportParams& params,
                                         const CurvatureDimension& cd);

}  // namespace rcdlab
