#include "rcdlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rcdlab/error.hpp"

namespace rcdlab {

namespace {

using Params = std::vector<std::pair<std::string, double>>;

Params base_params(const ModelSpace& space, const CurvatureDimension& cd) {
  return {{"K", cd.K}, {"N", cd.N}, {"h", space.spacing()}, {"n", static_cast<double>(space.size())}};
}

InequalityReport make_report(std::string name, const ModelSpace& space, Params params,
                             double tolerance) {
  InequalityReport r;
  r.name = std::move(name);
  r.model = space.model();
  r.params = std::move(params);
  r.tolerance = tolerance;
  return r;
}

// Fills one margin entry per node, asserting only interior ones.
void node_margins(InequalityReport& r, const ModelSpace& space, const std::vector<double>& margin) {
  r.coordinates = space.nodes();
  r.margin = margin;
  r.asserted.resize(margin.size());
  for (std::size_t i = 0; i < margin.size(); ++i) r.asserted[i] = space.is_interior(i);
}

double interior_min(const ModelSpace& space, const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (space.is_interior(i)) lo = std::min(lo, v[i]);
  return lo;
}

void require_time(double T, const char* what) {
  require(T > 0.0 && std::isfinite(T), ErrorCode::Domain, std::string(what) + " needs a positive time");
}

// The evolved-field forms below let the kernel suite evaluate a field at a
// shifted time while keeping the coefficients of the full time.

InequalityReport li_yau_evolved(const ModelSpace& space, const ScalarField& u, double T, double N,
                                double tolerance) {
  const double c = li_yau_constant(T, N);
  const ScalarField lap = laplacian(space, u);
  const ScalarField gam = carre_du_champ(space, u);
  std::vector<double> margin(u.size());
  std::vector<double> log_margin(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    margin[i] = c * u[i] * u[i] + u[i] * lap[i] - gam[i];
    log_margin[i] = c - (gam[i] / (u[i] * u[i]) - lap[i] / u[i]);
  }
  Params p = base_params(space, CurvatureDimension{0.0, N});
  p.emplace_back("T", T);
  InequalityReport r = make_report("li_yau", space, std::move(p), tolerance);
  node_margins(r, space, margin);
  r.diagnostics = {{"bound_constant", c}, {"log_form_min_margin", interior_min(space, log_margin)}};
  finalize(r);
  return r;
}

InequalityReport bakry_qian_evolved(const ModelSpace& space, const ScalarField& u, double T,
                                    const CurvatureDimension& cd, double tolerance) {
  require(cd.K > 0.0, ErrorCode::InvalidParameter, "bakry_qian_check needs K > 0");
  const double c = bakry_qian_constant(cd);
  const ScalarField lap = laplacian(space, u);
  std::vector<double> margin(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) margin[i] = c * u[i] - lap[i];
  Params p = base_params(space, cd);
  p.emplace_back("T", T);
  InequalityReport r = make_report("bakry_qian", space, std::move(p), tolerance);
  node_margins(r, space, margin);
  r.diagnostics = {{"bound_constant", c}, {"proof_regime_start", 2.0 / cd.K}};
  if (T < 2.0 / cd.K) {
    r.verdict = Verdict::OutsideProofRegime;
    r.notes = "T < 2/K: margins recorded, not asserted";
  }
  finalize(r);
  return r;
}

InequalityReport baudoin_garofalo_evolved(const ModelSpace& space, const ScalarField& u, double T,
                                          const CurvatureDimension& cd, double tolerance) {
  const BgBound b = bg_bound(T, cd);
  const ScalarField lap = laplacian(space, u);
  const ScalarField gam = carre_du_champ(space, u);
  std::vector<double> margin(u.size());
  std::vector<double> log_margin(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    margin[i] = b.c1 * lap[i] * u[i] + b.c2 * u[i] * u[i] - gam[i];
    log_margin[i] = b.c1 * lap[i] / u[i] + b.c2 - gam[i] / (u[i] * u[i]);
  }
  Params p = base_params(space, cd);
  p.emplace_back("T", T);
  InequalityReport r = make_report("baudoin_garofalo", space, std::move(p), tolerance);
  node_margins(r, space, margin);
  r.diagnostics = {{"c1", b.c1}, {"c2", b.c2}, {"log_form_min_margin", interior_min(space, log_margin)}};
  finalize(r);
  return r;
}

double harnack_margin(const ModelSpace& space, double u_s_at_x, double u_t_at_y, std::size_t x,
                      std::size_t y, double s, double t, const CurvatureDimension& cd) {
  const double d = space.distance(x, y);
  const double rhs = u_s_at_x * std::exp(-d * d / harnack_distance_scale(s, t, cd.K)) *
                     harnack_prefactor(s, t, cd);
  return u_t_at_y - rhs;
}

}  // namespace

ScalarField regularize(const ScalarField& f) {
  require(f.min() >= 0.0, ErrorCode::Precondition, "the verifier needs f >= 0");
  const double eps = 1e-12 * std::max(f.sup_norm(), 1.0);
  return apply(f, [eps](double v) { return v + eps; });
}

InequalityReport li_yau_check(const SpectralSolver& solver, const ScalarField& f, double T, double N,
                              double tolerance) {
  check_field(*solver.space(), f);
  require_time(T, "li_yau_check");
  require(N > 0.0 && std::isfinite(N), ErrorCode::InvalidParameter, "li_yau_check needs N > 0");
  return li_yau_evolved(*solver.space(), heat_apply(solver, regularize(f), T), T, N, tolerance);
}

InequalityReport bakry_qian_check(const SpectralSolver& solver, const ScalarField& f, double T,
                                  const CurvatureDimension& cd, double tolerance) {
  check_field(*solver.space(), f);
  require(cd.K > 0.0, ErrorCode::InvalidParameter, "bakry_qian_check needs K > 0");
  require_time(T, "bakry_qian_check");
  return bakry_qian_evolved(*solver.space(), heat_apply(solver, regularize(f), T), T, cd, tolerance);
}

InequalityReport baudoin_garofalo_check(const SpectralSolver& solver, const ScalarField& f,
                                        double T, const CurvatureDimension& cd, double tolerance) {
  check_field(*solver.space(), f);
  require_time(T, "baudoin_garofalo_check");
  return baudoin_garofalo_evolved(*solver.space(), heat_apply(solver, regularize(f), T), T, cd,
                                  tolerance);
}

InequalityReport harnack_check(const SpectralSolver& solver, const ScalarField& f, std::size_t x,
                               std::size_t y, double s, double t, const CurvatureDimension& cd,
                               double tolerance) {
  return harnack_scan(solver, f, {{x, y}}, {{s, t}}, cd, tolerance);
}

InequalityReport harnack_scan(const SpectralSolver& solver, const ScalarField& f,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                              const std::vector<std::pair<double, double>>& times,
                              const CurvatureDimension& cd, double tolerance) {
  const ModelSpace& space = *solver.space();
  check_field(space, f);
  for (const auto& [s, t] : times)
    require(s > 0.0 && t > s && std::isfinite(t), ErrorCode::Domain, "harnack needs 0 < s < t");
  for (const auto& [x, y] : pairs)
    require(x < space.size() && y < space.size(), ErrorCode::InvalidParameter, "node out of range");
  const ScalarField fe = regularize(f);

  Params p = base_params(space, cd);
  if (pairs.size() == 1 && times.size() == 1) {
    p.emplace_back("s", times[0].first);
    p.emplace_back("t", times[0].second);
    p.emplace_back("x", space.nodes()[pairs[0].first]);
    p.emplace_back("y", space.nodes()[pairs[0].second]);
  } else {
    p.emplace_back("instances", static_cast<double>(pairs.size() * times.size()));
  }
  InequalityReport r = make_report(pairs.size() * times.size() == 1 ? "harnack" : "harnack_scan",
                                   space, std::move(p), tolerance);
  for (const auto& [s, t] : times) {
    const ScalarField us = heat_apply(solver, fe, s);
    const ScalarField ut = heat_apply(solver, fe, t);
    for (const auto& [x, y] : pairs) {
      r.coordinates.push_back(static_cast<double>(r.margin.size()));
      r.margin.push_back(harnack_margin(space, us[x], ut[y], x, y, s, t, cd));
    }
  }
  r.asserted.assign(r.margin.size(), true);
  finalize(r);
  return r;
}

namespace {

InequalityReport gradient_flow_check(const char* name, const SpectralSolver& solver,
                                     const ScalarField& f, double t, const CurvatureDimension& cd,
                                     double tolerance, bool dimensional) {
  const ModelSpace& space = *solver.space();
  check_field(space, f);
  require_time(t, name);
  const ScalarField u = heat_apply(solver, f, t);
  const ScalarField bound = heat_apply(solver, carre_du_champ(space, f), t);
  const ScalarField gam = carre_du_champ(space, u);
  const double decay = std::exp(-2.0 * cd.K * t);
  const double coef = dimensional ? eks_coefficient(t, cd) : 0.0;
  std::vector<double> margin(u.size());
  if (dimensional) {
    const ScalarField lap = laplacian(space, u);
    for (std::size_t i = 0; i < u.size(); ++i)
      margin[i] = decay * bound[i] - gam[i] - coef * lap[i] * lap[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) margin[i] = decay * bound[i] - gam[i];
  }
  Params p = base_params(space, cd);
  p.emplace_back("t", t);
  InequalityReport r = make_report(name, space, std::move(p), tolerance);
  node_margins(r, space, margin);
  r.diagnostics = {{"decay", decay}};
  if (dimensional) r.diagnostics.emplace_back("eks_coefficient", coef);
  finalize(r);
  return r;
}

}  // namespace

InequalityReport be_flow_check(const SpectralSolver& solver, const ScalarField& f, double t,
                               const CurvatureDimension& cd, double tolerance) {
  return gradient_flow_check("be_flow", solver, f, t, cd, tolerance, false);
}

InequalityReport eks_check(const SpectralSolver& solver, const ScalarField& f, double t,
                           const CurvatureDimension& cd, double tolerance) {
  return gradient_flow_check("eks", solver, f, t, cd, tolerance, true);
}

InequalityReport bochner_check(const ModelSpace& space, const ScalarField& f,
                               const CurvatureDimension& cd, double tolerance) {
  check_field(space, f);
  const ScalarField g2 = gamma2(space, f);
  const ScalarField gam = carre_du_champ(space, f);
  const ScalarField lap = laplacian(space, f);
  std::vector<double> margin(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) margin[i] = g2[i] - cd.K * gam[i] - lap[i] * lap[i] / cd.N;
  InequalityReport r = make_report("bochner", space, base_params(space, cd), tolerance);
  node_margins(r, space, margin);
  finalize(r);
  return r;
}

namespace {

void require_positive_floor(const ScalarField& f) {
  const double norm = f.sup_norm();
  require(norm > 0.0 && f.min() >= 1e-6 * norm, ErrorCode::Precondition,
          "the Phi machinery needs min f >= 1e-6 * sup|f| > 0");
}

void require_phi_time(double T, double t) {
  require(T > 0.0 && std::isfinite(T), ErrorCode::Domain, "Phi needs T > 0");
  require(t >= 0.0 && t < T, ErrorCode::Domain, "Phi needs t in [0, T)");
}

ScalarField log_field(const ScalarField& u) {
  return apply(u, [](double v) { return std::log(v); });
}

// u Γ(log u) with u = H_{T−t} f.
ScalarField phi_integrand(const SpectralSolver& solver, const ScalarField& f, double T, double t) {
  const ScalarField u = heat_apply(solver, f, T - t);
  return u * carre_du_champ(*solver.space(), log_field(u));
}

}  // namespace

ScalarField phi(const SpectralSolver& solver, const ScalarField& f, double T, double t) {
  check_field(*solver.space(), f);
  require_phi_time(T, t);
  const ScalarField fe = regularize(f);
  require_positive_floor(fe);
  return heat_apply(solver, phi_integrand(solver, fe, T, t), t);
}

double phi_integral(const SpectralSolver& solver, const ScalarField& f, double T, double t,
                    const ScalarField& weight) {
  return inner(phi(solver, f, T, t), weight);
}

double phi_integral_derivative(const SpectralSolver& solver, const ScalarField& f, double T,
                               double t, const ScalarField& weight) {
  const ModelSpace& space = *solver.space();
  check_field(space, f);
  check_field(space, weight);
  require_phi_time(T, t);
  const ScalarField fe = regularize(f);
  require_positive_floor(fe);
  // ∫Φφ = ∫ u Γ(L) ψ with u = H_{T−t}f, L = log u, ψ = H_tφ; u̇ = −Δu, L̇ = −Δu/u, ψ̇ = Δψ.
  const ScalarField u = heat_apply(solver, fe, T - t);
  const ScalarField L = log_field(u);
  const ScalarField psi = heat_apply(solver, weight, t);
  const ScalarField lap_u = laplacian(space, u);
  const ScalarField dL = apply(lap_u, [](double v) { return -v; }) * apply(u, [](double v) { return 1.0 / v; });
  const ScalarField gam = carre_du_champ(space, L);
  const ScalarField gam_mixed = carre_du_champ(space, L, dL);
  const ScalarField dg = apply(lap_u, [](double v) { return -v; }) * gam + 2.0 * (u * gam_mixed);
  return inner(dg, psi) + inner(u * gam, laplacian(space, psi));
}

double phi_identity_rhs(const SpectralSolver& solver, const ScalarField& f, double T, double t,
                        const ScalarField& weight) {
  const ModelSpace& space = *solver.space();
  check_field(space, f);
  check_field(space, weight);
  require_phi_time(T, t);
  const ScalarField fe = regularize(f);
  require_positive_floor(fe);
  const ScalarField u = heat_apply(solver, fe, T - t);
  const ScalarField psi = heat_apply(solver, weight, t);
  return 2.0 * inner(u * gamma2(space, log_field(u)), psi);
}

PhiDerivativeDefect phi_derivative_check(const SpectralSolver& solver, const ScalarField& f,
                                         double T, double t, const ScalarField& weight, double dt) {
  require(dt > 0.0 && t - dt > 0.0 && t + dt < T, ErrorCode::Domain,
          "the difference stencil must lie inside (0, T)");
  PhiDerivativeDefect d;
  d.central = (phi_integral(solver, f, T, t + dt, weight) - phi_integral(solver, f, T, t - dt, weight)) /
              (2.0 * dt);
  d.exact = phi_integral_derivative(solver, f, T, t, weight);
  d.identity = phi_identity_rhs(solver, f, T, t, weight);
  d.defect = std::abs(d.central - d.identity);
  d.stencil = std::abs(d.central - d.exact);
  d.floor = std::abs(d.exact - d.identity);
  return d;
}

TimeProfile quadratic_defgamma_profile(double T, const CurvatureDimension& cd) {
  require(T > 0.0, ErrorCode::Domain, "profile needs T > 0");
  TimeProfile p;
  p.name = "quadratic";
  p.a = [T](double t) { return (1.0 - t / T) * (1.0 - t / T); };
  p.da = [T](double t) { return -2.0 / T * (1.0 - t / T); };
  // a′/a = −2/(T − t)
  p.gamma = [T, cd](double t) { return cd.N / 4.0 * (-2.0 / (T - t) + 2.0 * cd.K); };
  return p;
}

InequalityReport prop2_check(const SpectralSolver& solver, const ScalarField& f, double T,
                             const TimeProfile& profile, const ScalarField& weight,
                             const std::vector<double>& times, double dt,
                             const CurvatureDimension& cd, double tolerance) {
  const ModelSpace& space = *solver.space();
  check_field(space, f);
  check_field(space, weight);
  require(weight.min() >= 0.0, ErrorCode::Precondition, "prop2_check needs phi >= 0");
  require(dt > 0.0, ErrorCode::Domain, "prop2_check needs dt > 0");
  for (double t : times)
    require(t - dt > 0.0 && t + dt < T, ErrorCode::Domain, "prop2_check time grid must lie inside (0, T)");

  const ScalarField fe = regularize(f);
  require_positive_floor(fe);
  const ScalarField uT = heat_apply(solver, fe, T);
  const double lap_term = inner(laplacian(space, uT), weight);
  const double mass_term = inner(uT, weight);

  Params p = base_params(space, cd);
  p.emplace_back("T", T);
  p.emplace_back("dt", dt);
  InequalityReport r = make_report("prop2", space, std::move(p), tolerance);
  r.notes = "profile " + profile.name;
  double worst_bracket = 0.0;
  for (double t : times) {
    const auto g = [&](double tau) { return profile.a(tau) * phi_integral(solver, f, T, tau, weight); };
    const double lhs = (g(t + dt) - g(t - dt)) / (2.0 * dt);
    const double a = profile.a(t);
    const double gm = profile.gamma(t);
    const double bracket = profile.da(t) - 4.0 * a * gm / cd.N + 2.0 * cd.K * a;
    worst_bracket = std::max(worst_bracket, std::abs(bracket));
    const double rhs = bracket * phi_integral(solver, f, T, t, weight) + 4.0 * a * gm / cd.N * lap_term -
                       2.0 * a * gm * gm / cd.N * mass_term;
    r.coordinates.push_back(t);
    r.margin.push_back(lhs - rhs);
  }
  r.asserted.assign(r.margin.size(), true);
  r.diagnostics = {{"max_abs_first_bracket", worst_bracket}};
  finalize(r);
  return r;
}

VProfile::VProfile(std::string name, double T, std::function<double(double)> value,
                   std::function<double(double)> derivative)
    : name_(std::move(name)), T_(T), value_(std::move(value)), derivative_(std::move(derivative)) {
  require(T > 0.0 && std::isfinite(T), ErrorCode::InvalidProfile, "V profile needs T > 0");
  require(std::abs(value_(0.0) - 1.0) <= 1e-12, ErrorCode::InvalidProfile, "V profile needs V(0) = 1");
  require(std::abs(value_(T)) <= 1e-12, ErrorCode::InvalidProfile, "V profile needs V(T) = 0");
  constexpr int kSamples = 256;
  for (int k = 0; k <= kSamples; ++k) {
    const double tau = T * k / kSamples;
    const double v = value_(tau);
    require(std::isfinite(v) && v >= -1e-12, ErrorCode::InvalidProfile, "V profile must be nonnegative");
    require(std::isfinite(derivative_(tau)), ErrorCode::InvalidProfile, "V profile derivative must be finite");
  }
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto sq = [this](double tau) { return value_(tau) * value_(tau); };
  const auto dsq = [this](double tau) { return derivative_(tau) * derivative_(tau); };
  int_sq_ = Quad::integrate(sq, 0.0, T, 15, 1e-12);
  int_dsq_ = Quad::integrate(dsq, 0.0, T, 15, 1e-12);
}

VProfile v_linear(double T) {
  return VProfile(
      "v_linear", T, [T](double tau) { return 1.0 - tau / T; }, [T](double) { return -1.0 / T; });
}

VProfile v_bg(double T, double K) {
  if (K == 0.0) {
    return VProfile(
        "v_bg", T, [T](double tau) { return 1.0 - tau / T; }, [T](double) { return -1.0 / T; });
  }
  const double c = 2.0 * K / 3.0;
  // 1 − e^{−cT}
  const double denom = -std::expm1(-c * T);
  // e^{−cτ} − e^{−cT} = e^{−cT} (e^{c(T−τ)} − 1)
  const auto value = [=](double tau) {
    return std::exp(-K * tau / 3.0) * std::exp(-c * T) * std::expm1(c * (T - tau)) / denom;
  };
  const auto derivative = [=](double tau) {
    const double lead = std::exp(-K * tau / 3.0);
    const double num = std::exp(-c * T) * std::expm1(c * (T - tau));
    return lead * (-(K / 3.0) * num - c * std::exp(-c * tau)) / denom;
  };
  return VProfile("v_bg", T, value, derivative);
}

PreLiYauCoefficients pre_li_yau_coefficients(const VProfile& V, const CurvatureDimension& cd) {
  PreLiYauCoefficients c;
  c.laplacian = 2.0 * cd.K * V.integral_sq() - 1.0;
  c.constant = 0.5 * cd.N * (V.integral_dsq() - cd.K + cd.K * cd.K * V.integral_sq());
  return c;
}

InequalityReport pre_li_yau_check(const SpectralSolver& solver, const ScalarField& f, double T,
                                  const VProfile& V, const CurvatureDimension& cd, double tolerance) {
  const ModelSpace& space = *solver.space();
  check_field(space, f);
  require_time(T, "pre_li_yau_check");
  require(std::abs(V.horizon() - T) <= 1e-12 * T, ErrorCode::InvalidProfile,
          "V profile horizon differs from T");
  const PreLiYauCoefficients c = pre_li_yau_coefficients(V, cd);
  const ScalarField u = heat_apply(solver, regularize(f), T);
  const ScalarField lap = laplacian(space, u);
  const ScalarField gam = carre_du_champ(space, u);
  std::vector<double> margin(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    margin[i] = c.constant * u[i] * u[i] - gam[i] - c.laplacian * u[i] * lap[i];
  Params p = base_params(space, cd);
  p.emplace_back("T", T);
  InequalityReport r = make_report("pre_li_yau", space, std::move(p), tolerance);
  r.notes = "profile " + V.name();
  node_margins(r, space, margin);
  r.diagnostics = {{"laplacian_coefficient", c.laplacian},
                   {"constant", c.constant},
                   {"integral_v_sq", V.integral_sq()},
                   {"integral_dv_sq", V.integral_dsq()}};
  finalize(r);
  return r;
}

double kernel_warmup_time(const ModelSpace& space) { return 5.0 * space.spacing() * space.spacing(); }

std::vector<InequalityReport> kernel_corollary_suite(const SpectralSolver& solver, std::size_t x,
                                                     const CurvatureDimension& cd,
                                                     const std::vector<double>& times,
                                                     double tolerance) {
  const ModelSpace& space = *solver.space();
  require(x < space.size(), ErrorCode::InvalidParameter, "kernel base node out of range");
  const double t0 = kernel_warmup_time(space);
  for (double t : times)
    require(t > kernel_min_time(space) + t0 && std::isfinite(t), ErrorCode::Domain,
            "kernel times must exceed t_min(h) + warm-up");

  // Entries of H_{t0}δ_x below zero are roundoff at the 1e-13 level.
  const HeatKernelField warm = heat_kernel(solver, x, t0);
  const ScalarField f = regularize(apply(warm.density, [](double v) { return std::max(v, 0.0); }));

  // Harnack pairs: the base node against nodes spread over the space, both ways.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = space.size();
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t other = (x + (k + 1) * n / 8) % n;
    pairs.emplace_back(x, other);
    pairs.emplace_back(other, x);
  }

  std::vector<InequalityReport> out;
  const auto tag = [&](InequalityReport r, const char* item, double t) {
    r.name = std::string("kernel_") + item;
    r.params.emplace_back("base", space.nodes()[x]);
    r.params.emplace_back("t0", t0);
    if (r.param("t", -1.0) < 0.0 && r.param("T", -1.0) < 0.0) r.params.emplace_back("t", t);
    out.push_back(std::move(r));
  };
  for (double t : times) {
    const ScalarField u = heat_apply(solver, f, t - t0);
    if (cd.K == 0.0) tag(li_yau_evolved(space, u, t, cd.N, tolerance), "li_yau", t);
    if (cd.K > 0.0) tag(bakry_qian_evolved(space, u, t, cd, tolerance), "bakry_qian", t);
    tag(baudoin_garofalo_evolved(space, u, t, cd, tolerance), "baudoin_garofalo", t);

    const double s = t / 2.0;
    if (s - t0 > 0.0) {
      const ScalarField us = heat_apply(solver, f, s - t0);
      InequalityReport r = make_report("harnack", space, base_params(space, cd), tolerance);
      r.params.emplace_back("s", s);
      r.params.emplace_back("t", t);
      for (const auto& [a, b] : pairs) {
        r.coordinates.push_back(static_cast<double>(r.margin.size()));
        r.margin.push_back(harnack_margin(space, us[a], u[b], a, b, s, t, cd));
      }
      r.asserted.assign(r.margin.size(), true);
      finalize(r);
      tag(std::move(r), "harnack", t);
    }
  }
  std::sort(out.begin(), out.end(), report_less);
  return out;
}

}  // namespace rcdlab
