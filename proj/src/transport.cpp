#include "rcdlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "rcdlab/coefficients.hpp"
#include "rcdlab/error.hpp"

namespace rcdlab {

DiscreteMeasure::DiscreteMeasure(SpacePtr space, std::vector<double> masses)
    : space_(std::move(space)), masses_(std::move(masses)) {
  require(space_ != nullptr && masses_.size() == space_->size(), ErrorCode::Dimension,
          "measure length does not match the node count");
  double total = 0.0;
  for (double v : masses_) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidParameter, "masses must be nonnegative");
    total += v;
  }
  require(total > 0.0, ErrorCode::InvalidParameter, "measure has zero total mass");
  for (double& v : masses_) v /= total;
}

DiscreteMeasure DiscreteMeasure::from_density(const ScalarField& density) {
  const auto& m = density.space()->measure();
  std::vector<double> masses(density.size());
  for (std::size_t i = 0; i < masses.size(); ++i) masses[i] = density[i] * m[i];
  return DiscreteMeasure(density.space(), std::move(masses));
}

DiscreteMeasure DiscreteMeasure::dirac(SpacePtr space, std::size_t i) {
  require(i < space->size(), ErrorCode::InvalidParameter, "node out of range");
  std::vector<double> masses(space->size(), 0.0);
  masses[i] = 1.0;
  return DiscreteMeasure(std::move(space), std::move(masses));
}

DiscreteMeasure DiscreteMeasure::uniform_ball(SpacePtr space, std::size_t center, double r) {
  require(center < space->size(), ErrorCode::InvalidParameter, "ball center out of range");
  require(r >= 0.0, ErrorCode::InvalidParameter, "ball radius must be nonnegative");
  std::vector<double> masses(space->size(), 0.0);
  const double reach = r * (1.0 + 1e-12);
  for (std::size_t i = 0; i < masses.size(); ++i)
    if (space->distance(center, i) <= reach) masses[i] = space->measure()[i];
  return DiscreteMeasure(std::move(space), std::move(masses));
}

double TransportPlan::marginal_error() const {
  std::vector<double> rows(source_marginal.size(), 0.0);
  std::vector<double> cols(target_marginal.size(), 0.0);
  for (const auto& c : cells) {
    rows[c.source] += c.mass;
    cols[c.target] += c.mass;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) err = std::max(err, std::abs(rows[i] - source_marginal[i]));
  for (std::size_t j = 0; j < cols.size(); ++j) err = std::max(err, std::abs(cols[j] - target_marginal[j]));
  return err;
}

namespace {

void check_pair(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1) {
  const auto& a = *mu0.space();
  const auto& b = *mu1.space();
  require(&a == &b || (a.size() == b.size() && a.fingerprint() == b.fingerprint()),
          ErrorCode::Dimension, "measures live on different spaces");
}

struct Atoms {
  std::vector<std::size_t> node;
  std::vector<double> level;  // cumulative mass at the right end of each atom
};

Atoms atoms_of(const DiscreteMeasure& mu) {
  Atoms a;
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0.0) continue;
    acc += mu[i];
    a.node.push_back(i);
    a.level.push_back(acc);
  }
  a.level.back() = 1.0;
  return a;
}

double plan_cost(std::vector<PlanCell>& cells, double h) {
  double cost = 0.0;
  for (auto& c : cells) {
    c.displacement = static_cast<double>(c.steps) * h;
    cost += c.mass * c.displacement * c.displacement;
  }
  return cost;
}

// Monotone coupling u ↦ (F0⁻¹(u), F̃1⁻¹(u + shift)) where F̃1 is the periodic
// lift of F1 (period n grid steps). shift = 0 on the interval.
std::vector<PlanCell> monotone_cells(const Atoms& src, const Atoms& tgt, double shift, long period_steps) {
  std::vector<PlanCell> cells;
  const double base = std::floor(shift);
  long wraps = static_cast<long>(base);
  const double rem = shift - base;
  std::size_t j = static_cast<std::size_t>(std::upper_bound(tgt.level.begin(), tgt.level.end(), rem) - tgt.level.begin());
  if (j == tgt.level.size()) {
    j = 0;
    ++wraps;
  }
  std::size_t i = 0;
  double u = 0.0;
  while (i < src.level.size()) {
    const double src_end = src.level[i];
    const double tgt_end = tgt.level[j] + static_cast<double>(wraps) - shift;
    const double end = std::min(src_end, tgt_end);
    if (end > u) {
      PlanCell c;
      c.source = src.node[i];
      c.target = tgt.node[j];
      c.mass = end - u;
      c.steps = static_cast<long>(tgt.node[j]) + wraps * period_steps - static_cast<long>(src.node[i]);
      cells.push_back(c);
      u = end;
    }
    if (src_end <= tgt_end) ++i;
    if (tgt_end <= src_end) {
      if (++j == tgt.level.size()) {
        j = 0;
        ++wraps;
      }
    }
  }
  return cells;
}

double lifted_cost(const std::vector<PlanCell>& cells) {
  double cost = 0.0;
  for (const auto& c : cells) cost += c.mass * static_cast<double>(c.steps) * static_cast<double>(c.steps);
  return cost;
}

TransportPlan make_plan(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, std::vector<PlanCell> cells) {
  TransportPlan plan;
  plan.space = mu0.space();
  plan.source_marginal = mu0.masses();
  plan.target_marginal = mu1.masses();
  plan.cost = plan_cost(cells, plan.space->spacing());
  plan.cells = std::move(cells);
  return plan;
}

}  // namespace

TransportPlan w2_quantile(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1) {
  check_pair(mu0, mu1);
  const auto& space = *mu0.space();
  const Atoms src = atoms_of(mu0);
  const Atoms tgt = atoms_of(mu1);
  if (!space.periodic()) return make_plan(mu0, mu1, monotone_cells(src, tgt, 0.0, 0));

  // On the circle the lifted cost is convex and piecewise linear in the shift,
  // with kinks where a source level meets a shifted target level. Search the
  // sorted kink list for the minimum.
  const long n = static_cast<long>(space.size());
  std::vector<double> kinks;
  kinks.reserve(3 * src.level.size() * tgt.level.size() + 3);
  for (double a : src.level)
    for (double b : tgt.level)
      for (int k = -1; k <= 1; ++k) {
        const double theta = b - a + k;
        if (theta >= -1.0 && theta <= 1.0) kinks.push_back(theta);
      }
  kinks.push_back(0.0);
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  const auto cost_at = [&](std::size_t k) { return lifted_cost(monotone_cells(src, tgt, kinks[k], n)); };
  std::size_t lo = 0;
  std::size_t hi = kinks.size() - 1;
  while (hi - lo > 2) {
    const std::size_t m1 = lo + (hi - lo) / 3;
    const std::size_t m2 = hi - (hi - lo) / 3;
    if (cost_at(m1) < cost_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  std::size_t best = lo;
  double best_cost = cost_at(lo);
  for (std::size_t k = lo + 1; k <= hi; ++k) {
    const double c = cost_at(k);
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
  }
  return make_plan(mu0, mu1, monotone_cells(src, tgt, kinks[best], n));
}

namespace {

// Transportation simplex (MODI) on the supports of the two measures.
class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<double> supply, std::vector<double> demand, std::vector<double> cost)
      : rows_(supply.size()), cols_(demand.size()), supply_(std::move(supply)),
        demand_(std::move(demand)), cost_(std::move(cost)) {}

  struct Basic {
    std::size_t row;
    std::size_t col;
    double flow;
  };

  std::vector<Basic> solve() {
    north_west_corner();
    double scale = 0.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    const double tol = 1e-13 * std::max(scale, 1.0);
    const std::size_t max_iter = 50 * (rows_ + cols_) * (rows_ + cols_) + 1000;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      potentials();
      double best = -tol;
      std::size_t er = 0;
      std::size_t ec = 0;
      bool found = false;
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
          const double r = cost_[i * cols_ + j] - u_[i] - v_[j];
          if (r < best) {
            best = r;
            er = i;
            ec = j;
            found = true;
          }
        }
      if (!found) return basis_;
      pivot(er, ec);
    }
    fail(ErrorCode::Numerical, "transportation simplex exceeded its iteration budget");
  }

 private:
  void north_west_corner() {
    std::size_t i = 0;
    std::size_t j = 0;
    double rs = supply_[0];
    double rd = demand_[0];
    while (true) {
      const double q = std::min(rs, rd);
      basis_.push_back({i, j, q});
      rs -= q;
      rd -= q;
      if (i + 1 == rows_ && j + 1 == cols_) break;
      if (j + 1 == cols_ || (i + 1 < rows_ && rs <= rd)) {
        ++i;
        rs += supply_[i];
      } else {
        ++j;
        rd += demand_[j];
      }
    }
  }

  // Tree nodes: rows are 0..rows_-1, columns rows_..rows_+cols_-1.
  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(rows_ + cols_);
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      adj[basis_[b].row].push_back(b);
      adj[rows_ + basis_[b].col].push_back(b);
    }
    return adj;
  }

  void potentials() {
    const auto adj = adjacency();
    u_.assign(rows_, 0.0);
    v_.assign(cols_, 0.0);
    std::vector<bool> seen(rows_ + cols_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t b : adj[node]) {
        const auto& e = basis_[b];
        const std::size_t other = node < rows_ ? rows_ + e.col : e.row;
        if (seen[other]) continue;
        seen[other] = true;
        const double c = cost_[e.row * cols_ + e.col];
        if (node < rows_)
          v_[e.col] = c - u_[e.row];
        else
          u_[e.row] = c - v_[e.col];
        stack.push_back(other);
      }
    }
  }

  void pivot(std::size_t er, std::size_t ec) {
    // Tree path from row er to column ec; the entering cell closes the cycle.
    const auto adj = adjacency();
    const std::size_t start = er;
    const std::size_t goal = rows_ + ec;
    std::vector<long> via(rows_ + cols_, -1);
    std::vector<bool> seen(rows_ + cols_, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty() && !seen[goal]) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t b : adj[node]) {
        const auto& e = basis_[b];
        const std::size_t other = node < rows_ ? rows_ + e.col : e.row;
        if (seen[other]) continue;
        seen[other] = true;
        via[other] = static_cast<long>(b);
        stack.push_back(other);
      }
    }
    std::vector<std::size_t> path;  // basis indices from the goal back to the start
    for (std::size_t node = goal; node != start;) {
      const auto b = static_cast<std::size_t>(via[node]);
      path.push_back(b);
      const auto& e = basis_[b];
      node = node < rows_ ? rows_ + e.col : e.row;
    }
    // Cells adjacent to the goal column lose flow, then signs alternate.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = path.front();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (basis_[path[k]].flow < theta) {
        theta = basis_[path[k]].flow;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) basis_[path[k]].flow += (k % 2 == 0 ? -theta : theta);
    basis_[leave] = {er, ec, theta};
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  std::vector<double> cost_;
  std::vector<Basic> basis_;
  std::vector<double> u_;
  std::vector<double> v_;
};

long signed_steps(const ModelSpace& space, std::size_t i, std::size_t j) {
  long k = static_cast<long>(j) - static_cast<long>(i);
  if (!space.periodic()) return k;
  const long n = static_cast<long>(space.size());
  if (k > n / 2) k -= n;
  if (k < -(n / 2)) k += n;
  return k;
}

}  // namespace

TransportPlan w2_lp(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1) {
  check_pair(mu0, mu1);
  const auto& space = *mu0.space();
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < mu0.size(); ++i)
    if (mu0[i] > 0.0) rows.push_back(i);
  for (std::size_t j = 0; j < mu1.size(); ++j)
    if (mu1[j] > 0.0) cols.push_back(j);
  if (rows.size() + cols.size() > kLpSupportLimit)
    fail(ErrorCode::SizeGuard, "w2_lp: combined support " + std::to_string(rows.size() + cols.size()) +
                                   " exceeds " + std::to_string(kLpSupportLimit) +
                                   "; use w2_quantile for one-dimensional spaces");

  std::vector<double> supply(rows.size());
  std::vector<double> demand(cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) supply[a] = mu0[rows[a]];
  for (std::size_t b = 0; b < cols.size(); ++b) demand[b] = mu1[cols[b]];
  double ds = 0.0;
  double dd = 0.0;
  for (double v : supply) ds += v;
  for (double v : demand) dd += v;
  demand.back() = std::max(0.0, demand.back() + (ds - dd));

  std::vector<double> cost(rows.size() * cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const double d = space.distance(rows[a], cols[b]);
      cost[a * cols.size() + b] = d * d;
    }

  TransportationSimplex simplex(std::move(supply), std::move(demand), std::move(cost));
  std::vector<PlanCell> cells;
  for (const auto& e : simplex.solve()) {
    if (e.flow <= 0.0) continue;
    PlanCell c;
    c.source = rows[e.row];
    c.target = cols[e.col];
    c.mass = e.flow;
    c.steps = signed_steps(space, c.source, c.target);
    cells.push_back(c);
  }
  std::sort(cells.begin(), cells.end(), [](const PlanCell& a, const PlanCell& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  return make_plan(mu0, mu1, std::move(cells));
}

DiscreteMeasure interpolate_plan(const TransportPlan& plan, double t) {
  require(t >= 0.0 && t <= 1.0, ErrorCode::Domain, "interpolation time must lie in [0, 1]");
  const auto& space = *plan.space;
  const std::size_t n = space.size();
  std::vector<double> masses(n, 0.0);
  for (const auto& c : plan.cells) {
    const double pos = static_cast<double>(c.source) + t * static_cast<double>(c.steps);
    double base = std::floor(pos);
    const double frac = pos - base;
    if (space.periodic()) {
      const double nn = static_cast<double>(n);
      base = std::fmod(base, nn);
      if (base < 0) base += nn;
      const auto k = static_cast<std::size_t>(base) % n;
      masses[k] += c.mass * (1.0 - frac);
      if (frac > 0.0) masses[(k + 1) % n] += c.mass * frac;
    } else {
      const auto k = static_cast<std::size_t>(std::clamp(base, 0.0, static_cast<double>(n - 1)));
      masses[k] += c.mass * (1.0 - frac);
      if (frac > 0.0) masses[std::min(k + 1, n - 1)] += c.mass * frac;
    }
  }
  return DiscreteMeasure(plan.space, std::move(masses));
}

InterpolationPath displacement_interpolation(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                             const std::vector<double>& times) {
  InterpolationPath path;
  path.plan = w2_quantile(mu0, mu1);
  path.times = times;
  path.slices.reserve(times.size());
  for (double t : times) path.slices.push_back(interpolate_plan(path.plan, t));
  return path;
}

double plan_action(const InterpolationPath& path) {
  double action = 0.0;
  for (const auto& c : path.plan.cells) action += c.mass * c.displacement * c.displacement;
  return action;
}

double compression_bound(const InterpolationPath& path) {
  double bound = 0.0;
  for (const auto& slice : path.slices)
    for (std::size_t i = 0; i < slice.size(); ++i) bound = std::max(bound, slice.density(i));
  return bound;
}

double sigma_coefficient(double t, double theta, double K, double N) {
  require(t >= 0.0 && t <= 1.0, ErrorCode::Domain, "sigma needs t in [0, 1]");
  require(theta >= 0.0, ErrorCode::Domain, "sigma needs theta >= 0");
  require(N >= 1.0, ErrorCode::InvalidParameter, "sigma needs N >= 1");
  const double k = K * theta * theta;
  if (k >= N * std::numbers::pi * std::numbers::pi) return std::numeric_limits<double>::infinity();
  if (k > 0.0) {
    const double a = theta * std::sqrt(K / N);
    return std::sin(t * a) / std::sin(a);
  }
  if (k == 0.0) return t;
  const double a = theta * std::sqrt(-K / N);
  return std::sinh(t * a) / std::sinh(a);
}

CdStarResult cd_star_check(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, double t,
                           const CurvatureDimension& cd, double N_prime) {
  require(t >= 0.0 && t <= 1.0, ErrorCode::Domain, "cd_star_check needs t in [0, 1]");
  require(N_prime >= cd.N, ErrorCode::InvalidParameter, "cd_star_check needs N' >= N");
  const TransportPlan plan = w2_quantile(mu0, mu1);
  const DiscreteMeasure mut = interpolate_plan(plan, t);
  const auto& m = mu0.space()->measure();
  const double p = 1.0 / N_prime;

  CdStarResult r;
  for (std::size_t i = 0; i < mut.size(); ++i) {
    const double rho = mut.density(i);
    if (rho > 0.0) r.lhs -= std::pow(rho, 1.0 - p) * m[i];
  }
  for (const auto& c : plan.cells) {
    const double d = std::abs(c.displacement);
    const double s0 = sigma_coefficient(1.0 - t, d, cd.K, N_prime);
    const double s1 = sigma_coefficient(t, d, cd.K, N_prime);
    if (std::isinf(s0) || std::isinf(s1)) {
      r.vacuous = true;
      continue;
    }
    r.rhs -= c.mass * (s0 * std::pow(mu0.density(c.source), -p) + s1 * std::pow(mu1.density(c.target), -p));
  }
  if (r.vacuous) {
    r.rhs = -std::numeric_limits<double>::infinity();
    r.margin = std::numeric_limits<double>::infinity();
  } else {
    r.margin = r.rhs - r.lhs;
  }
  return r;
}

InequalityReport harnack_transport_check(const SpectralSolver& solver, const ScalarField& f,
                                         const HarnackTransportParams& params,
                                         const CurvatureDimension& cd) {
  const SpacePtr& space = solver.space();
  check_field(*space, f);
  require(f.min() >= 0.0, ErrorCode::Precondition, "harnack_transport_check needs f >= 0");
  require(params.s > 0.0 && params.t > params.s, ErrorCode::Domain, "need 0 < s < t");
  require(params.x < space->size() && params.y < space->size(), ErrorCode::InvalidParameter,
          "ball centers out of range");
  require(params.r >= 0.0 && std::isfinite(params.r), ErrorCode::InvalidParameter,
          "ball radius must be finite and nonnegative");

  const double eps = 1e-12 * std::max(f.sup_norm(), 1.0);
  const ScalarField f_eps = apply(f, [eps](double v) { return v + eps; });
  const ScalarField u_s = heat_apply(solver, f_eps, params.s);
  const ScalarField u_t = heat_apply(solver, f_eps, params.t);

  const DiscreteMeasure mu0 = DiscreteMeasure::uniform_ball(space, params.y, params.r);
  const DiscreteMeasure mu1 = DiscreteMeasure::uniform_ball(space, params.x, params.r);
  const TransportPlan plan = w2_quantile(mu0, mu1);

  double lhs = 0.0;
  for (const auto& c : plan.cells) lhs += c.mass * std::log(u_s[c.target] / u_t[c.source]);
  const double scale = harnack_distance_scale(params.s, params.t, cd.K);
  const double log_ratio = harnack_log_ratio(params.s, params.t, cd);
  const double rhs = plan.cost / scale + log_ratio;

  InequalityReport report;
  report.name = "harnack_transport";
  report.model = space->model();
  report.params = {{"K", cd.K},           {"N", cd.N},
                   {"h", space->spacing()}, {"n", static_cast<double>(space->size())},
                   {"r", params.r},       {"s", params.s},
                   {"t", params.t},       {"x", space->nodes()[params.x]},
                   {"y", space->nodes()[params.y]}};
  report.tolerance = params.tolerance;
  report.coordinates = {0.0};
  report.margin = {rhs - lhs};
  report.asserted = {true};
  report.diagnostics = {{"lhs", lhs},
                        {"action", plan.cost},
                        {"log_ratio", log_ratio},
                        {"log_ratio_integral", harnack_log_ratio_integral(params.s, params.t, cd)},
                        {"margin_integral_constant",
                         plan.cost / scale + harnack_log_ratio_integral(params.s, params.t, cd) - lhs},
                        {"epsilon", eps}};
  finalize(report);
  return report;
}

}  // namespace rcdlab
