#include "rcdlab/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "rcdlab/error.hpp"

namespace rcdlab {

ScalarField::ScalarField(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  require(space_ != nullptr, ErrorCode::Dimension, "field has no space");
  require(values_.size() == space_->size(), ErrorCode::Dimension,
          "field length does not match the node count");
  for (double v : values_)
    require(std::isfinite(v), ErrorCode::InvalidParameter, "field entries must be finite");
}

ScalarField::ScalarField(SpacePtr space, double value)
    : ScalarField(space, std::vector<double>(space ? space->size() : 0, value)) {}

ScalarField ScalarField::sample(SpacePtr space, const std::function<double(double)>& f) {
  std::vector<double> v(space->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(space->nodes()[i]);
  return ScalarField(std::move(space), std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double ScalarField::integral() const {
  const auto& m = space_->measure();
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * m[i];
  return s;
}

EdgeField::EdgeField(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  require(space_ != nullptr && values_.size() == space_->edge_count(), ErrorCode::Dimension,
          "edge field length does not match the edge count");
}

void check_field(const ModelSpace& space, const ScalarField& f) {
  const auto& s = *f.space();
  if (&s == &space) return;
  require(s.size() == space.size() && s.fingerprint() == space.fingerprint(), ErrorCode::Dimension,
          "field lives on a different space");
}

double inner(const ScalarField& f, const ScalarField& g) {
  check_field(*f.space(), g);
  const auto& m = f.space()->measure();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i] * m[i];
  return s;
}

ScalarField laplacian(const ModelSpace& space, const ScalarField& f) {
  check_field(space, f);
  const auto& c = space.conductance();
  const auto& m = space.measure();
  std::vector<double> out(space.size(), 0.0);
  for (std::size_t e = 0; e < space.edge_count(); ++e) {
    const auto [i, j] = space.edge(e);
    const double flux = c[e] * (f[j] - f[i]);
    out[i] += flux;
    out[j] -= flux;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= m[i];
  return ScalarField(f.space(), std::move(out));
}

EdgeField carre_du_champ_edge(const ModelSpace& space, const ScalarField& f, const ScalarField& g) {
  check_field(space, f);
  check_field(space, g);
  const double h = space.spacing();
  std::vector<double> out(space.edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) {
    const auto [i, j] = space.edge(e);
    out[e] = ((f[j] - f[i]) / h) * ((g[j] - g[i]) / h);
  }
  return EdgeField(f.space(), std::move(out));
}

ScalarField carre_du_champ(const ModelSpace& space, const ScalarField& f, const ScalarField& g) {
  const EdgeField edge = carre_du_champ_edge(space, f, g);
  const auto& w = space.edge_mass();
  std::vector<double> num(space.size(), 0.0);
  std::vector<double> den(space.size(), 0.0);
  for (std::size_t e = 0; e < edge.size(); ++e) {
    const auto [i, j] = space.edge(e);
    num[i] += w[e] * edge[e];
    den[i] += w[e];
    num[j] += w[e] * edge[e];
    den[j] += w[e];
  }
  for (std::size_t i = 0; i < num.size(); ++i) num[i] /= den[i];
  return ScalarField(f.space(), std::move(num));
}

double cheeger_energy(const ModelSpace& space, const ScalarField& f) {
  const EdgeField edge = carre_du_champ_edge(space, f, f);
  const auto& w = space.edge_mass();
  double s = 0.0;
  for (std::size_t e = 0; e < edge.size(); ++e) s += w[e] * edge[e];
  return 0.5 * s;
}

double integration_by_parts_defect(const ModelSpace& space, const ScalarField& f,
                                   const ScalarField& g) {
  const EdgeField edge = carre_du_champ_edge(space, f, g);
  const auto& w = space.edge_mass();
  double dirichlet = 0.0;
  for (std::size_t e = 0; e < edge.size(); ++e) dirichlet += w[e] * edge[e];
  return dirichlet + inner(f, laplacian(space, g));
}

ScalarField gamma2(const ModelSpace& space, const ScalarField& f) {
  const ScalarField lf = laplacian(space, f);
  const ScalarField half_lap = 0.5 * laplacian(space, carre_du_champ(space, f));
  return half_lap - carre_du_champ(space, f, lf);
}

ScalarField weighted_gradient_log(const ModelSpace& space, const ScalarField& f) {
  check_field(space, f);
  for (double v : f.values())
    require(v > 0.0, ErrorCode::Domain, "weighted_gradient_log needs a strictly positive field");
  ScalarField g = carre_du_champ(space, f);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::sqrt(g[i]) / f[i];
  return g;
}

double be_check(const ModelSpace& space, const ScalarField& f, const ScalarField& phi,
                const CurvatureDimension& cd) {
  check_field(space, phi);
  for (double v : phi.values())
    require(v >= 0.0, ErrorCode::Precondition, "be_check needs a nonnegative test function");
  const ScalarField lf = laplacian(space, f);
  const ScalarField gf = carre_du_champ(space, f);
  const ScalarField cross = carre_du_champ(space, f, lf);
  const ScalarField lphi = laplacian(space, phi);
  const auto& m = space.measure();
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    lhs += (0.5 * lphi[i] * gf[i] - phi[i] * cross[i]) * m[i];
    rhs += (cd.K * phi[i] * gf[i] + phi[i] * lf[i] * lf[i] / cd.N) * m[i];
  }
  return lhs - rhs;
}

double upper_gradient_check(const ModelSpace& space, const ScalarField& f, const DiscretePath& path) {
  check_field(space, f);
  require(!path.nodes.empty(), ErrorCode::InvalidPath, "path has no nodes");
  require(path.dt > 0.0, ErrorCode::InvalidPath, "path parameter step must be positive");
  const ScalarField gf = carre_du_champ(space, f);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    const std::size_t a = path.nodes[k];
    const std::size_t b = path.nodes[k + 1];
    require(a < space.size() && b < space.size(), ErrorCode::InvalidPath, "path node out of range");
    const double d = space.distance(a, b);
    require(d <= space.spacing() * (1.0 + 1e-12), ErrorCode::InvalidPath,
            "consecutive path nodes must be adjacent or coincident");
    const double speed = d / path.dt;
    integral += 0.5 * (std::sqrt(gf[a]) + std::sqrt(gf[b])) * speed * path.dt;
  }
  return integral - std::abs(f[path.nodes.back()] - f[path.nodes.front()]);
}

ScalarField apply(const ScalarField& f, const std::function<double(double)>& op) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(f[i]);
  return ScalarField(f.space(), std::move(v));
}

namespace {
template <typename Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  check_field(*a.space(), b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return ScalarField(a.space(), std::move(v));
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator*(double s, const ScalarField& a) {
  return apply(a, [s](double x) { return s * x; });
}

}  // namespace rcdlab
