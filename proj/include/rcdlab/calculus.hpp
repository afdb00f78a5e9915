#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rcdlab/space.hpp"

namespace rcdlab {

/// One real value per node of a ModelSpace.
class ScalarField {
 public:
  ScalarField(SpacePtr space, std::vector<double> values);
  /// Constant field.
  ScalarField(SpacePtr space, double value);
  /// Samples `f` at the node coordinates.
  static ScalarField sample(SpacePtr space, const std::function<double(double)>& f);

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  double min() const;
  double max() const;
  double sup_norm() const;
  /// ∫ f dm.
  double integral() const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// One real value per edge (adjacent node pair).
class EdgeField {
 public:
  EdgeField(SpacePtr space, std::vector<double> values);

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t e) const noexcept { return values_[e]; }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Throws ErrorCode::Dimension unless `f` lives on `space`.
void check_field(const ModelSpace& space, const ScalarField& f);

/// ⟨f, g⟩_m = Σ f_i g_i m_i.
double inner(const ScalarField& f, const ScalarField& g);

ScalarField laplacian(const ModelSpace& space, const ScalarField& f);
EdgeField carre_du_champ_edge(const ModelSpace& space, const ScalarField& f, const ScalarField& g);
/// Node Γ(f, g): edge-mass weighted average of the adjacent edge values.
ScalarField carre_du_champ(const ModelSpace& space, const ScalarField& f, const ScalarField& g);
inline ScalarField carre_du_champ(const ModelSpace& space, const ScalarField& f) {
  return carre_du_champ(space, f, f);
}
/// Ch(f) = ½ ∫ Γ(f) dm in edge form.
double cheeger_energy(const ModelSpace& space, const ScalarField& f);
/// ∫ Γ(f, g) dm + ∫ f Δg dm, both in edge form; zero up to roundoff.
double integration_by_parts_defect(const ModelSpace& space, const ScalarField& f,
                                   const ScalarField& g);
/// γ₂(f) = ½ Δ Γ(f) − Γ(f, Δf).
ScalarField gamma2(const ModelSpace& space, const ScalarField& f);
/// √Γ(f) / f; requires f > 0.
ScalarField weighted_gradient_log(const ModelSpace& space, const ScalarField& f);

/// Integrated Bochner inequality, LHS − RHS:
///   ∫ ½ Δφ Γ(f) − φ Γ(f, Δf) dm − K ∫ φ Γ(f) dm − (1/N) ∫ φ (Δf)² dm.
double be_check(const ModelSpace& space, const ScalarField& f, const ScalarField& phi,
                const CurvatureDimension& cd);

/// A discrete curve visiting adjacent (or repeated) nodes, one node per
/// parameter step `dt`.
struct DiscretePath {
  std::vector<std::size_t> nodes;
  double dt = 1.0;
};

/// ∫ G(γ_s)|γ̇_s| ds − |f(γ_1) − f(γ_0)| with G = √Γ(f) and the trapezoid
/// rule on each step.
double upper_gradient_check(const ModelSpace& space, const ScalarField& f, const DiscretePath& path);

// Pointwise helpers used by the verifiers.
ScalarField apply(const ScalarField& f, const std::function<double(double)>& op);
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace rcdlab
