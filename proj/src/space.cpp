#include "rcdlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>

#include "rcdlab/error.hpp"

namespace rcdlab {

CurvatureDimension CurvatureDimension::make(double K, double N) {
  require(std::isfinite(K), ErrorCode::InvalidParameter, "curvature bound K must be finite");
  require(std::isfinite(N) && N >= 1.0, ErrorCode::InvalidParameter,
          "dimension bound N must satisfy N >= 1");
  return {K, N};
}

const char* to_string(Topology t) noexcept {
  return t == Topology::Circle ? "circle" : "interval-neumann";
}

const char* to_string(WeightProfile w) noexcept {
  switch (w) {
    case WeightProfile::Flat: return "flat";
    case WeightProfile::Sine: return "sin^(N-1)";
    case WeightProfile::Sinh: return "sinh^(N-1)";
    case WeightProfile::Tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t digest(const std::string& model, const std::vector<double>& a,
                     const std::vector<double>& b, const std::vector<double>& c) {
  std::uint64_t hash = 14695981039346656037ull;
  hash = fnv1a(hash, model.data(), model.size());
  for (const auto* v : {&a, &b, &c}) hash = fnv1a(hash, v->data(), v->size() * sizeof(double));
  return hash;
}

}  // namespace

ModelSpace::ModelSpace(Init init)
    : model_(std::move(init.model)),
      topology_(init.topology),
      profile_(init.profile),
      nodes_(std::move(init.nodes)),
      h_(init.spacing),
      period_(init.period),
      expected_cd_(init.expected_cd),
      parameters_(std::move(init.parameters)) {
  const std::size_t n = nodes_.size();
  require(n >= 3, ErrorCode::InvalidGeometry, "a model space needs at least 3 nodes");
  require(h_ > 0.0 && std::isfinite(h_), ErrorCode::InvalidGeometry, "grid spacing must be positive");
  for (std::size_t i = 1; i < n; ++i)
    require(nodes_[i] > nodes_[i - 1], ErrorCode::InvalidGeometry, "nodes must be strictly increasing");
  const std::size_t edges = periodic() ? n : n - 1;
  require(init.node_weight.size() == n && init.edge_weight.size() == edges,
          ErrorCode::InvalidGeometry, "weight tables do not match the grid");

  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(init.node_weight[i] > 0.0 && std::isfinite(init.node_weight[i]),
            ErrorCode::InvalidParameter, "density must be positive at every node");
    raw[i] = init.node_weight[i] * h_;
  }
  if (!periodic()) {
    raw.front() *= 0.5;
    raw.back() *= 0.5;
  }
  double z = 0.0;
  for (double r : raw) z += r;

  measure_.resize(n);
  for (std::size_t i = 0; i < n; ++i) measure_[i] = raw[i] / z;
  // Push the normalization residue into the heaviest node so Σm = 1 holds
  // to the last bit the summation order allows.
  double total = 0.0;
  for (double m : measure_) total += m;
  auto heaviest = std::max_element(measure_.begin(), measure_.end());
  *heaviest += 1.0 - total;

  conductance_.resize(edges);
  edge_mass_.resize(edges);
  for (std::size_t e = 0; e < edges; ++e) {
    require(init.edge_weight[e] > 0.0 && std::isfinite(init.edge_weight[e]),
            ErrorCode::InvalidParameter, "density must be positive at every half node");
    conductance_[e] = init.edge_weight[e] / (h_ * z);
    edge_mass_[e] = conductance_[e] * h_ * h_;
  }
  fingerprint_ = digest(model_, nodes_, measure_, conductance_);
}

double ModelSpace::distance(std::size_t i, std::size_t j) const noexcept {
  const std::size_t k = i > j ? i - j : j - i;
  if (!periodic()) return static_cast<double>(k) * h_;
  return static_cast<double>(std::min(k, nodes_.size() - k)) * h_;
}

double ModelSpace::diameter() const noexcept {
  if (!periodic()) return static_cast<double>(nodes_.size() - 1) * h_;
  return static_cast<double>(nodes_.size() / 2) * h_;
}

bool ModelSpace::is_interior(std::size_t i, std::size_t margin) const noexcept {
  if (periodic()) return true;
  return i >= margin && i + margin < nodes_.size();
}

std::string ModelSpace::fingerprint_hex() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint_));
  return buf;
}

std::size_t ModelSpace::nearest_node(double x) const noexcept {
  const double n = static_cast<double>(nodes_.size());
  double k = std::round((x - nodes_.front()) / h_);
  if (periodic()) {
    k = std::fmod(k, n);
    if (k < 0) k += n;
    return static_cast<std::size_t>(k) % nodes_.size();
  }
  return static_cast<std::size_t>(std::clamp(k, 0.0, n - 1));
}

namespace {

using Density = std::function<double(double)>;

ModelSpace::Init sample_interval(std::string model, WeightProfile profile, std::size_t n,
                                 double a, double h, const Density& w) {
  ModelSpace::Init init;
  init.model = std::move(model);
  init.topology = Topology::IntervalNeumann;
  init.profile = profile;
  init.spacing = h;
  init.nodes.resize(n);
  init.node_weight.resize(n);
  init.edge_weight.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    init.nodes[i] = a + static_cast<double>(i) * h;
    init.node_weight[i] = w(init.nodes[i]);
  }
  for (std::size_t e = 0; e + 1 < n; ++e) init.edge_weight[e] = w(a + (static_cast<double>(e) + 0.5) * h);
  return init;
}

void check_count(std::size_t n) {
  require(n >= 3, ErrorCode::InvalidGeometry, "node count must be at least 3");
}

}  // namespace

SpacePtr build_interval(std::size_t n, double length) {
  check_count(n);
  require(std::isfinite(length) && length > 0.0, ErrorCode::InvalidGeometry,
          "interval length must be positive");
  auto init = sample_interval("interval", WeightProfile::Flat, n, 0.0,
                              length / static_cast<double>(n - 1), [](double) { return 1.0; });
  init.nodes.back() = length;
  init.expected_cd = CurvatureDimension{0.0, 1.0};
  init.parameters = {{"n", static_cast<double>(n)}, {"length", length}};
  return std::make_shared<const ModelSpace>(std::move(init));
}

SpacePtr build_circle(std::size_t n, double circumference) {
  check_count(n);
  require(std::isfinite(circumference) && circumference > 0.0, ErrorCode::InvalidGeometry,
          "circumference must be positive");
  ModelSpace::Init init;
  init.model = "circle";
  init.topology = Topology::Circle;
  init.profile = WeightProfile::Flat;
  init.spacing = circumference / static_cast<double>(n);
  init.period = circumference;
  init.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) init.nodes[i] = static_cast<double>(i) * init.spacing;
  init.node_weight.assign(n, 1.0);
  init.edge_weight.assign(n, 1.0);
  init.expected_cd = CurvatureDimension{0.0, 1.0};
  init.parameters = {{"n", static_cast<double>(n)}, {"circumference", circumference}};
  return std::make_shared<const ModelSpace>(std::move(init));
}

SpacePtr build_sphere_model(std::size_t n, double N) {
  check_count(n);
  require(std::isfinite(N) && N > 1.0, ErrorCode::InvalidParameter,
          "sphere model needs dimension N > 1");
  const double pi = std::numbers::pi;
  const double h = pi / static_cast<double>(n - 1);
  // Evaluate on the nearer half so the profile is mirror-symmetric bit for bit;
  // the vanishing endpoint values are replaced by w half a step inward.
  const auto w = [N, h, pi](double x) {
    double y = std::min(x, pi - x);
    if (y < 0.25 * h) y = 0.5 * h;
    return std::pow(std::sin(y), N - 1.0);
  };
  auto init = sample_interval("sphere_model", WeightProfile::Sine, n, 0.0, h, w);
  init.nodes.back() = pi;
  init.expected_cd = CurvatureDimension{N - 1.0, N};
  init.parameters = {{"n", static_cast<double>(n)}, {"N", N}};
  return std::make_shared<const ModelSpace>(std::move(init));
}

SpacePtr build_hyperbolic_model(std::size_t n, double N, double radius) {
  check_count(n);
  require(std::isfinite(N) && N > 1.0, ErrorCode::InvalidParameter,
          "hyperbolic model needs dimension N > 1");
  require(std::isfinite(radius) && radius > 0.0, ErrorCode::InvalidParameter,
          "hyperbolic model needs radius R > 0");
  const double h = radius / static_cast<double>(n);
  const auto w = [N](double x) { return std::pow(std::sinh(x), N - 1.0); };
  auto init = sample_interval("hyperbolic_model", WeightProfile::Sinh, n, h, h, w);
  init.nodes.back() = radius;
  init.expected_cd = CurvatureDimension{-(N - 1.0), N};
  init.parameters = {{"n", static_cast<double>(n)}, {"N", N}, {"R", radius}};
  return std::make_shared<const ModelSpace>(std::move(init));
}

SpacePtr build_tabulated(std::size_t n, const std::vector<double>& sample_x,
                         const std::vector<double>& sample_w,
                         std::optional<CurvatureDimension> expected_cd) {
  check_count(n);
  require(sample_x.size() >= 2 && sample_x.size() == sample_w.size(), ErrorCode::InvalidParameter,
          "tabulated density needs at least two (x, w) samples of equal length");
  for (std::size_t i = 1; i < sample_x.size(); ++i)
    require(sample_x[i] > sample_x[i - 1], ErrorCode::InvalidGeometry,
            "tabulated abscissae must be strictly increasing");
  const double a = sample_x.front();
  const double b = sample_x.back();
  const auto w = [&](double x) {
    auto it = std::upper_bound(sample_x.begin(), sample_x.end(), x);
    if (it == sample_x.begin()) return sample_w.front();
    if (it == sample_x.end()) return sample_w.back();
    const std::size_t k = static_cast<std::size_t>(it - sample_x.begin());
    const double s = (x - sample_x[k - 1]) / (sample_x[k] - sample_x[k - 1]);
    return (1.0 - s) * sample_w[k - 1] + s * sample_w[k];
  };
  auto init = sample_interval("tabulated", WeightProfile::Tabulated, n, a,
                              (b - a) / static_cast<double>(n - 1), w);
  init.nodes.back() = b;
  init.expected_cd = expected_cd;
  init.parameters = {{"n", static_cast<double>(n)}, {"a", a}, {"b", b}};
  return std::make_shared<const ModelSpace>(std::move(init));
}

}  // namespace rcdlab
