#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rcdlab/error.hpp"
#include "rcdlab/transport.hpp"
#include "support.hpp"

using namespace rcdlab;
using testing::kPi;

namespace {

// Equal-mass k-atom measures: an optimal coupling is a permutation, so the
// minimum over all k! permutations is the exact W₂².
double permutation_oracle(const ModelSpace& s, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) c += std::pow(s.distance(a[k], b[perm[k]]), 2);
    best = std::min(best, c / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::size_t> distinct_nodes(testing::Gen& g, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), g.engine());
  idx.resize(k);
  return idx;
}

DiscreteMeasure uniform_on(const SpacePtr& s, const std::vector<std::size_t>& nodes) {
  std::vector<double> m(s->size(), 0.0);
  for (auto i : nodes) m[i] = 1.0;
  return DiscreteMeasure(s, m);
}

double w2(const DiscreteMeasure& a, const DiscreteMeasure& b) { return std::sqrt(w2_quantile(a, b).cost); }

}  // namespace

TEST_CASE("sigma branch table") {
  CHECK(sigma_coefficient(0.3, 2, 0, 5) == 0.3);
  CHECK(std::isinf(sigma_coefficient(0.5, kPi, 4, 2)));
  CHECK(sigma_coefficient(0.5, 1, -1, 1) == doctest::Approx(0.4434094).epsilon(1e-7));
  CHECK(sigma_coefficient(0.5, 1, -1, 1) == std::sinh(0.5) / std::sinh(1.0));
  CHECK(sigma_coefficient(0.25, 1, 1, 2) == std::sin(0.25 * std::sqrt(0.5)) / std::sin(std::sqrt(0.5)));
  // Kθ² = Nπ² exactly sits on the infinite branch.
  CHECK(std::isinf(sigma_coefficient(0.5, 1.0, 2 * kPi * kPi, 2)));
}

TEST_CASE("property: sigma is pinned at the ends, monotone below a quarter period, continuous at K = 0") {
  testing::Gen g(31);
  for (int k = 0; k < 300; ++k) {
    const double N = g.uniform(1, 5), theta = g.uniform(0, 3);
    const double K = g.uniform(-3, 3);
    if (K * theta * theta >= N * kPi * kPi) continue;
    CHECK(sigma_coefficient(0, theta, K, N) == 0.0);
    if (theta > 0) CHECK(sigma_coefficient(1, theta, K, N) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = -1;
    // sin(tα)/sin α stops being monotone once α exceeds π/2.
    const bool monotone = 4 * K * theta * theta <= N * kPi * kPi;
    for (double t = 0; monotone && t <= 1.0; t += 0.05) {
      const double v = sigma_coefficient(t, theta, K, N);
      CHECK(v >= prev);
      prev = v;
    }
    const double small = std::pow(10.0, g.uniform(-8, -4)) * N / std::max(theta * theta, 1e-12) *
                         (g.uniform(0, 1) < 0.5 ? -1 : 1);
    const double t = g.uniform(0, 1);
    if (theta > 0)
      CHECK(std::abs(sigma_coefficient(t, theta, small, N) - t) <= std::abs(small) * theta * theta + 1e-15);
  }
}

TEST_CASE("quantile coupling: identical measures and point masses") {
  const auto s = build_interval(21, 1.0);
  const auto mu = DiscreteMeasure(s, std::vector<double>(21, 1.0));
  const auto plan = w2_quantile(mu, mu);
  CHECK(plan.cost == 0.0);
  for (const auto& c : plan.cells) CHECK(c.source == c.target);
  const auto p = w2_quantile(DiscreteMeasure::dirac(s, 3), DiscreteMeasure::dirac(s, 15));
  REQUIRE(p.cells.size() == 1);
  CHECK(p.cost == doctest::Approx(std::pow(s->distance(3, 15), 2)).epsilon(1e-14));
  const auto c = build_circle(20, 2 * kPi);
  const auto q = w2_quantile(DiscreteMeasure::dirac(c, 1), DiscreteMeasure::dirac(c, 18));
  CHECK(q.cost == doctest::Approx(std::pow(3 * c->spacing(), 2)).epsilon(1e-13));
  CHECK(q.cells[0].steps == -3);
}

TEST_CASE("LP oracle: two-point example and identical measures") {
  const auto s = build_interval(3, 1.0);
  const DiscreteMeasure mu0(s, {0.5, 0.0, 0.5});
  const DiscreteMeasure mu1(s, {0.0, 1.0, 0.0});
  CHECK(w2_lp(mu0, mu1).cost == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(w2_lp(mu0, mu0).cost == 0.0);
}

TEST_CASE("property: quantile and LP agree with the permutation oracle") {
  testing::Gen g(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(8, 40));
    const SpacePtr s = trial % 2 ? build_circle(n, g.uniform(1, 7)) : build_interval(n, g.uniform(1, 7));
    const auto k = static_cast<std::size_t>(g.integer(1, 6));
    const auto a = distinct_nodes(g, n, k);
    const auto b = distinct_nodes(g, n, k);
    const double oracle = permutation_oracle(*s, a, b);
    const auto mu0 = uniform_on(s, a), mu1 = uniform_on(s, b);
    CAPTURE(s->model());
    CHECK(std::abs(w2_quantile(mu0, mu1).cost - oracle) <= 1e-12);
    CHECK(std::abs(w2_lp(mu0, mu1).cost - oracle) <= 1e-12);
  }
}

TEST_CASE("property: random sparse measures, quantile equals LP, plans are exact couplings") {
  testing::Gen g(123);
  for (int trial = 0; trial < 80; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(5, 60));
    const SpacePtr s = trial % 2 ? build_circle(n, 2 * kPi) : build_sphere_model(n, 2.0);
    const auto k0 = static_cast<std::size_t>(g.integer(1, static_cast<int>(std::min<std::size_t>(n, 30))));
    const auto k1 = static_cast<std::size_t>(g.integer(1, static_cast<int>(std::min<std::size_t>(n, 30))));
    const DiscreteMeasure mu0(s, g.sparse_masses(n, k0));
    const DiscreteMeasure mu1(s, g.sparse_masses(n, k1));
    const auto q = w2_quantile(mu0, mu1);
    const auto lp = w2_lp(mu0, mu1);
    CHECK(std::abs(q.cost - lp.cost) <= 1e-8);
    CHECK(q.marginal_error() <= 1e-12);
    CHECK(lp.marginal_error() <= 1e-12);
    double direct = 0.0;
    for (const auto& c : q.cells) {
      CHECK(c.mass >= 0.0);
      CHECK(std::abs(c.displacement) == doctest::Approx(s->distance(c.source, c.target)).epsilon(1e-12));
      direct += c.mass * std::pow(s->distance(c.source, c.target), 2);
    }
    CHECK(direct == doctest::Approx(q.cost).epsilon(1e-12));
  }
}

TEST_CASE("property: W2 triangle inequality") {
  testing::Gen g(5150);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacePtr s = trial % 2 ? build_circle(40, 2 * kPi) : build_interval(40, kPi);
    const DiscreteMeasure a(s, g.sparse_masses(40, 8)), b(s, g.sparse_masses(40, 8)), c(s, g.sparse_masses(40, 8));
    CHECK(w2(a, c) <= w2(a, b) + w2(b, c) + 1e-8);
  }
}

TEST_CASE("LP size guard") {
  const auto s = build_interval(500, 1.0);
  const DiscreteMeasure mu(s, std::vector<double>(500, 1.0));
  try {
    w2_lp(mu, mu);
    FAIL("expected a size guard error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeGuard);
    CHECK(std::string(e.what()).find("w2_quantile") != std::string::npos);
  }
}

TEST_CASE("measures on different spaces are rejected") {
  const auto a = build_interval(10, 1.0), b = build_interval(10, 2.0);
  CHECK_THROWS_AS(w2_quantile(DiscreteMeasure::dirac(a, 0), DiscreteMeasure::dirac(b, 0)), Error);
  CHECK_THROWS_AS(DiscreteMeasure(a, std::vector<double>(10, 0.0)), Error);
  CHECK_THROWS_AS(DiscreteMeasure(a, std::vector<double>(9, 1.0)), Error);
}

TEST_CASE("displacement interpolation") {
  const auto s = build_interval(11, 1.0);
  SUBCASE("identical endpoints stay put") {
    const DiscreteMeasure mu(s, {1, 2, 3, 0, 0, 1, 0, 0, 2, 1, 1});
    const auto path = displacement_interpolation(mu, mu, {0, 0.3, 0.7, 1});
    for (const auto& slice : path.slices) CHECK(testing::max_abs_diff(slice.masses(), mu.masses()) <= 1e-15);
    CHECK(plan_action(path) == 0.0);
  }
  SUBCASE("midpoint of two point masses") {
    const auto path = displacement_interpolation(DiscreteMeasure::dirac(s, 0), DiscreteMeasure::dirac(s, 10), {0, 0.5, 1});
    CHECK(path.slices[1][5] == doctest::Approx(1.0));
    CHECK(path.slices[0][0] == 1.0);
    CHECK(path.slices[2][10] == 1.0);
    CHECK(plan_action(path) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(compression_bound(path) == doctest::Approx(1.0 / s->measure()[0]).epsilon(1e-14));
  }
  SUBCASE("split mass between bracketing nodes") {
    const auto path = displacement_interpolation(DiscreteMeasure::dirac(s, 0), DiscreteMeasure::dirac(s, 3), {0.5});
    CHECK(path.slices[0][1] == doctest::Approx(0.5));
    CHECK(path.slices[0][2] == doctest::Approx(0.5));
  }
  SUBCASE("uniform measure has unit compression") {
    const DiscreteMeasure m(s, s->measure());
    CHECK(compression_bound(displacement_interpolation(m, m, {0, 0.5, 1})) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("property: constant speed and endpoint reproduction") {
  testing::Gen g(404);
  for (int trial = 0; trial < 20; ++trial) {
    const SpacePtr s = trial % 2 ? build_circle(200, 2 * kPi) : build_interval(200, kPi);
    const auto f0 = testing::smooth_field(s, g, 0.2), f1 = testing::smooth_field(s, g, 0.2);
    const auto mu0 = DiscreteMeasure::from_density(f0), mu1 = DiscreteMeasure::from_density(f1);
    const auto path = displacement_interpolation(mu0, mu1, {0.0, 0.25, 0.5, 1.0});
    CHECK(testing::max_abs_diff(path.slices[0].masses(), mu0.masses()) <= 1e-12);
    CHECK(testing::max_abs_diff(path.slices[3].masses(), mu1.masses()) <= 1e-12);
    for (const auto& slice : path.slices)
      CHECK(std::accumulate(slice.masses().begin(), slice.masses().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    const double total = std::sqrt(path.plan.cost);
    for (std::size_t k = 1; k < 3; ++k)
      CHECK(std::abs(w2(mu0, path.slices[k]) - path.times[k] * total) <= 2 * s->spacing());
    CHECK(plan_action(path) == doctest::Approx(w2_quantile(mu0, mu1).cost).epsilon(1e-12));
    CHECK(compression_bound(path) > 0.0);
  }
}

TEST_CASE("cd_star convexity") {
  SUBCASE("identical measures give zero margin") {
    const auto s = build_sphere_model(100, 2.0);
    testing::Gen g(1);
    const auto mu = DiscreteMeasure::from_density(testing::smooth_field(s, g));
    const auto r = cd_star_check(mu, mu, 0.4, {1, 2}, 2);
    CHECK(std::abs(r.margin) <= 1e-10);
    CHECK_FALSE(r.vacuous);
  }
  SUBCASE("gaussians on a flat interval") {
    const auto s = build_interval(200, 1.0);
    const auto a = DiscreteMeasure::from_density(
        ScalarField::sample(s, [](double x) { return std::exp(-std::pow((x - 0.3) / 0.08, 2)) + 1e-3; }));
    const auto b = DiscreteMeasure::from_density(
        ScalarField::sample(s, [](double x) { return std::exp(-std::pow((x - 0.7) / 0.15, 2)) + 1e-3; }));
    for (double t : {0.25, 0.5, 0.75}) CHECK(cd_star_check(a, b, t, {0, 1}, 1).margin >= -s->spacing());
  }
  SUBCASE("infinite branch is flagged") {
    const auto s = build_interval(50, 10.0);
    const auto r = cd_star_check(DiscreteMeasure::dirac(s, 0), DiscreteMeasure::dirac(s, 49), 0.5, {1, 1}, 1);
    CHECK(r.vacuous);
  }
  SUBCASE("N' must dominate N") {
    const auto s = build_interval(10, 1.0);
    const auto mu = DiscreteMeasure::dirac(s, 2);
    CHECK_THROWS_AS(cd_star_check(mu, mu, 0.5, {0, 2}, 1), Error);
  }
}

TEST_CASE("Harnack transport replay") {
  const auto s = build_circle(200, 2 * kPi);
  const SpectralSolver solver(s);
  SUBCASE("constant field with coincident balls") {
    HarnackTransportParams p;
    p.x = p.y = 10;
    p.r = 2 * s->spacing();
    const auto r = harnack_transport_check(solver, ScalarField(s, 3.0), p, {0, 1});
    CHECK(std::abs(r.diagnostic("lhs")) <= 1e-14);
    CHECK(r.min_margin >= 0.0);
    CHECK(r.diagnostic("log_ratio") == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(r.verdict == Verdict::Pass);
  }
  SUBCASE("smooth field agrees with the direct check") {
    const auto f = ScalarField::sample(s, [](double x) { return 1.5 + std::cos(x) + 0.3 * std::sin(2 * x); });
    HarnackTransportParams p;
    p.x = 30;
    p.y = 60;
    p.r = 2 * s->spacing();
    const auto r = harnack_transport_check(solver, f, p, {0, 1});
    CHECK(r.min_margin >= -1e-6);
    CHECK(r.verdict == Verdict::Pass);
  }
  SUBCASE("invalid parameters") {
    HarnackTransportParams p;
    p.s = 1.0;
    p.t = 0.5;
    CHECK_THROWS_AS(harnack_transport_check(solver, ScalarField(s, 1.0), p, {0, 1}), Error);
    auto neg = ScalarField(s, 1.0);
    neg[0] = -1;
    CHECK_THROWS_AS(harnack_transport_check(solver, neg, HarnackTransportParams{}, {0, 1}), Error);
  }
}
