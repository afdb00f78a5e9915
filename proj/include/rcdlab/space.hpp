#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcdlab {

/// Lower Ricci bound K and upper dimension bound N of a curvature-dimension
/// condition. Construct through make(), which enforces N >= 1 and finite K.
struct CurvatureDimension {
  double K = 0.0;
  double N = 1.0;

  static CurvatureDimension make(double K, double N);
};

enum class Topology { IntervalNeumann, Circle };
enum class WeightProfile { Flat, Sine, Sinh, Tabulated };

const char* to_string(Topology t) noexcept;
const char* to_string(WeightProfile w) noexcept;

/// Uniform-grid discretization of a weighted one-dimensional model space.
///
/// Node masses are w(x_i)·h with the trapezoid half weight at interval
/// endpoints, normalized to sum to one. Each edge (i, i+1) carries the
/// conductance w(x_{i+1/2}) / (h·Z), Z being the same normalization, so that
/// the three-point Laplacian is self-adjoint in l²(m) with zero flux through
/// interval ends. Immutable after construction.
class ModelSpace {
 public:
  struct Init {
    std::string model;
    Topology topology = Topology::IntervalNeumann;
    WeightProfile profile = WeightProfile::Flat;
    std::vector<double> nodes;
    double spacing = 0.0;
    double period = 0.0;  // circle only
    std::vector<double> node_weight;  // w at nodes (already endpoint-clamped)
    std::vector<double> edge_weight;  // w at half nodes, one per edge
    std::optional<CurvatureDimension> expected_cd;
    std::vector<std::pair<std::string, double>> parameters;
  };

  explicit ModelSpace(Init init);

  const std::string& model() const noexcept { return model_; }
  Topology topology() const noexcept { return topology_; }
  WeightProfile profile() const noexcept { return profile_; }
  bool periodic() const noexcept { return topology_ == Topology::Circle; }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return conductance_.size(); }
  double spacing() const noexcept { return h_; }
  double period() const noexcept { return period_; }

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& measure() const noexcept { return measure_; }
  /// Edge conductances c_e; Σ_e c_e (Δ_e f)(Δ_e g) = Σ_i m_i Γ-pairing.
  const std::vector<double>& conductance() const noexcept { return conductance_; }
  /// Edge masses c_e·h², the quadrature weights of edge-form integrals.
  const std::vector<double>& edge_mass() const noexcept { return edge_mass_; }

  /// Endpoints (tail, head) of edge e; on the circle the last edge wraps.
  std::pair<std::size_t, std::size_t> edge(std::size_t e) const noexcept {
    return {e, (e + 1) % nodes_.size()};
  }

  double distance(std::size_t i, std::size_t j) const noexcept;
  double diameter() const noexcept;

  /// Interior means at least `margin` grid steps from an interval end.
  bool is_interior(std::size_t i, std::size_t margin = 2) const noexcept;

  const std::optional<CurvatureDimension>& expected_cd() const noexcept { return expected_cd_; }
  const std::vector<std::pair<std::string, double>>& parameters() const noexcept {
    return parameters_;
  }

  /// FNV-1a digest of the discretization (nodes, measure, conductances).
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  std::string fingerprint_hex() const;

  /// Node whose coordinate is closest to x (respecting periodicity).
  std::size_t nearest_node(double x) const noexcept;

 private:
  std::string model_;
  Topology topology_;
  WeightProfile profile_;
  std::vector<double> nodes_;
  double h_;
  double period_;
  std::vector<double> measure_;
  std::vector<double> conductance_;
  std::vector<double> edge_mass_;
  std::optional<CurvatureDimension> expected_cd_;
  std::vector<std::pair<std::string, double>> parameters_;
  std::uint64_t fingerprint_ = 0;
};

using SpacePtr = std::shared_ptr<const ModelSpace>;

/// Flat interval [0, length] with Neumann closure; models CD(0,1).
SpacePtr build_interval(std::size_t n, double length);
/// Flat circle of the given circumference; models CD(0,1).
SpacePtr build_circle(std::size_t n, double circumference);
/// ([0, π], sin^{N−1} dx): radial part of the round N-sphere, CD(N−1, N).
SpacePtr build_sphere_model(std::size_t n, double N);
/// ([h, R], sinh^{N−1} dx) with h = R/n: radial part of hyperbolic space,
/// CD(−(N−1), N).
SpacePtr build_hyperbolic_model(std::size_t n, double N, double radius);
/// Interval [a, b] with a density tabulated at `sample_x` (strictly
/// increasing, positive values) and linearly interpolated.
SpacePtr build_tabulated(std::size_t n, const std::vector<double>& sample_x,
                         const std::vector<double>& sample_w,
                         std::optional<CurvatureDimension> expected_cd = std::nullopt);

}  // namespace rcdlab
