#pragma once

#include <cstddef>
#include <vector>

#include "rcdlab/calculus.hpp"

namespace rcdlab {

/// Eigendecomposition of the m-self-adjoint generator of a ModelSpace.
///
/// Eigenvalues are nonincreasing and ≤ 0; the first pair is exactly
/// (0, constant 1). Eigenfields are orthonormal in l²(m). Immutable after
/// construction, so one solver can be shared by concurrent checks.
class SpectralSolver {
 public:
  explicit SpectralSolver(SpacePtr space);

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  /// k-th eigenfield as a ScalarField.
  ScalarField eigenfield(std::size_t k) const;
  /// Value of the k-th eigenfield at node i.
  double eigenfield_at(std::size_t k, std::size_t i) const noexcept {
    return basis_[k * n_ + i];
  }

  /// Spectral coefficients ⟨f, e_k⟩_m.
  std::vector<double> coefficients(const ScalarField& f) const;
  /// Σ_k g(λ_k) c_k e_k.
  ScalarField synthesize(const std::vector<double>& coefficients) const;

 private:
  SpacePtr space_;
  std::size_t n_ = 0;
  std::vector<double> eigenvalues_;
  std::vector<double> basis_;  // row k holds e_k (node-major inside a row)
};

/// Diagnostic residuals of a solver: max |⟨e_i,e_j⟩ − δ_ij| and
/// max_k ‖Δe_k − λ_k e_k‖∞ / max(1, |λ_k|).
struct SolverResiduals {
  double orthonormality = 0.0;
  double eigen_equation = 0.0;
};

SpectralSolver build_solver(SpacePtr space);
SolverResiduals solver_residuals(const SpectralSolver& solver);

/// H_t f = Σ e^{λ_k t} ⟨f, e_k⟩_m e_k; t ≥ 0.
ScalarField heat_apply(const SpectralSolver& solver, const ScalarField& f, double t);
/// Δ H_t f evaluated spectrally; t > 0.
ScalarField heat_time_derivative(const SpectralSolver& solver, const ScalarField& f, double t);

/// Density of the Dirac mass at node x with respect to m: (1/m_x)·1_x.
ScalarField dirac_density(const SpacePtr& space, std::size_t x);

/// Density p(t, x, ·) of H_t δ_x with respect to m.
struct HeatKernelField {
  std::size_t base = 0;
  double time = 0.0;
  ScalarField density;
  /// Set when some entry is below −1e-12 (below the grid's diffusive scale).
  bool resolution_warning = false;
};

/// Diffusive resolution scale of the grid, t_min(h) = h².
inline double kernel_min_time(const ModelSpace& space) { return space.spacing() * space.spacing(); }

HeatKernelField heat_kernel(const SpectralSolver& solver, std::size_t x, double t);

/// Euclidean heat kernel in dimension N and its logarithmic derivatives.
struct GaussianKernelValues {
  double p = 0.0;            ///< (4πt)^{−N/2} e^{−r²/4t}
  double grad_log_sq = 0.0;  ///< |∇ log p|² = r²/4t²
  double dt_log = 0.0;       ///< ∂_t log p = r²/4t² − N/2t
};

GaussianKernelValues gaussian_kernel_oracle(double N, double t, double r);

}  // namespace rcdlab
