#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rcdlab/error.hpp"
#include "rcdlab/space.hpp"
#include "support.hpp"

using namespace rcdlab;
using testing::kPi;

namespace {

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rcdlab::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("interval with five nodes uses trapezoid masses") {
  const auto s = build_interval(5, 1.0);
  REQUIRE(s->size() == 5);
  CHECK(s->spacing() == doctest::Approx(0.25));
  const std::vector<double> expected = {0.125, 0.25, 0.25, 0.25, 0.125};
  CHECK(testing::max_abs_diff(s->measure(), expected) <= 1e-15);
  CHECK(s->topology() == Topology::IntervalNeumann);
  CHECK(s->edge_count() == 4);
}

TEST_CASE("interval with three nodes on [0, pi]") {
  const auto s = build_interval(3, kPi);
  CHECK(s->nodes()[0] == 0.0);
  CHECK(s->nodes()[1] == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(s->nodes()[2] == kPi);
  CHECK(s->spacing() == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(s->expected_cd()->K == 0.0);
  CHECK(s->expected_cd()->N == 1.0);
}

TEST_CASE("constructors reject invalid geometry and parameters") {
  CHECK(code_of([] { build_interval(2, 1.0); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { build_interval(10, 0.0); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { build_interval(10, -1.0); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { build_circle(2, 1.0); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { build_sphere_model(10, 1.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_hyperbolic_model(10, 0.5, 1.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_hyperbolic_model(10, 2.0, 0.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_tabulated(10, {0.0, 0.0}, {1.0, 1.0}); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { build_tabulated(10, {0.0, 1.0}, {1.0, -1.0}); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { CurvatureDimension::make(0.0, 0.5); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { CurvatureDimension::make(INFINITY, 2.0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("circle arc distance") {
  const auto s = build_circle(4, 2 * kPi);
  CHECK(s->distance(0, 2) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(s->distance(0, 3) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(s->edge_count() == 4);
  CHECK(s->edge(3) == std::pair<std::size_t, std::size_t>{3, 0});
  CHECK(s->nearest_node(2 * kPi - 0.1) == 0);
  CHECK(s->nearest_node(-kPi / 2) == 3);
}

TEST_CASE("sphere model measure is symmetric with mean pi/2") {
  const auto s = build_sphere_model(101, 2.0);
  const auto& m = s->measure();
  CHECK(std::abs(total(m) - 1.0) <= 1e-14);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == doctest::Approx(m[m.size() - 1 - i]).epsilon(1e-14));
  double mean = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) mean += m[i] * s->nodes()[i];
  CHECK(std::abs(mean - kPi / 2) <= 1e-3);
  CHECK(s->expected_cd()->K == 1.0);
  CHECK(s->expected_cd()->N == 2.0);
  for (double v : m) CHECK(v > 0.0);
}

TEST_CASE("sphere model with N = 3 peaks at the equator") {
  const auto s = build_sphere_model(101, 3.0);
  const auto& m = s->measure();
  const auto peak = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
  CHECK(peak == s->nearest_node(kPi / 2));
}

TEST_CASE("hyperbolic model weights increase and record expected cd") {
  const auto s = build_hyperbolic_model(51, 2.0, 1.0);
  CHECK(std::abs(total(s->measure()) - 1.0) <= 1e-14);
  for (std::size_t i = 2; i + 1 < s->size(); ++i) CHECK(s->measure()[i] > s->measure()[i - 1]);
  CHECK(s->nodes().front() == doctest::Approx(s->spacing()));
  CHECK(s->nodes().back() == 1.0);
  const auto t = build_hyperbolic_model(51, 1.5, 2.0);
  CHECK(t->expected_cd()->K == doctest::Approx(-0.5));
  CHECK(t->expected_cd()->N == 1.5);
}

TEST_CASE("tabulated model interpolates the density") {
  const auto s = build_tabulated(11, {0.0, 1.0}, {1.0, 3.0}, CurvatureDimension{0.0, 2.0});
  REQUIRE(s->expected_cd().has_value());
  // w(x) = 1 + 2x: interior masses proportional to w(x_i).
  const double ratio = s->measure()[5] / s->measure()[1];
  CHECK(ratio == doctest::Approx((1 + 2 * 0.5) / (1 + 2 * 0.1)).epsilon(1e-12));
  CHECK_FALSE(build_tabulated(11, {0.0, 1.0}, {1.0, 1.0})->expected_cd().has_value());
}

TEST_CASE("property: every constructor normalizes and yields a metric") {
  testing::Gen g(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(3, 60));
    const std::vector<SpacePtr> spaces = {
        build_interval(n, g.uniform(0.1, 10)), build_circle(n, g.uniform(0.1, 10)),
        build_sphere_model(n, g.uniform(1.1, 6)), build_hyperbolic_model(n, g.uniform(1.1, 6), g.uniform(0.2, 3))};
    for (const auto& s : spaces) {
      CAPTURE(s->model());
      CHECK(std::abs(total(s->measure()) - 1.0) <= 1e-14);
      for (double m : s->measure()) CHECK(m > 0.0);
      for (std::size_t i = 1; i < s->size(); ++i) CHECK(s->nodes()[i] > s->nodes()[i - 1]);
      const std::size_t k = s->size();
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(s->distance(i, i) == 0.0);
        for (std::size_t j = 0; j < k; ++j) {
          CHECK(s->distance(i, j) == s->distance(j, i));
          const std::size_t l = static_cast<std::size_t>(g.integer(0, static_cast<int>(k) - 1));
          CHECK(s->distance(i, l) <= s->distance(i, j) + s->distance(j, l) + 1e-14);
        }
      }
    }
  }
}

TEST_CASE("refinement reproduces the coarse density profile to second order") {
  // Node densities m_i / (h Z) sampled at shared nodes of two grids.
  const auto err = [](std::size_t n) {
    const auto coarse = build_sphere_model(n, 3.0);
    const auto fine = build_sphere_model(2 * n - 1, 3.0);
    double d = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = coarse->measure()[i] / coarse->spacing();
      const double b = fine->measure()[2 * i] / fine->spacing();
      d = std::max(d, std::abs(a - b));
    }
    return d;
  };
  const double e1 = err(41), e2 = err(81);
  CHECK(e1 / e2 > 3.0);
}

TEST_CASE("conductances match the edge weight and fingerprints identify discretizations") {
  const auto s = build_interval(21, 2.0);
  // Flat weight: c_e = 1 / (h Z) with Z = 2 (the trapezoid integral of 1).
  for (double c : s->conductance()) CHECK(c == doctest::Approx(1.0 / (s->spacing() * 2.0)).epsilon(1e-13));
  CHECK(s->fingerprint() == build_interval(21, 2.0)->fingerprint());
  CHECK(s->fingerprint() != build_interval(21, 2.5)->fingerprint());
  CHECK(s->fingerprint() != build_circle(21, 2.0)->fingerprint());
  CHECK(s->fingerprint_hex().size() == 16);
  CHECK(std::string(to_string(Topology::Circle)) == "circle");
  CHECK(std::string(to_string(WeightProfile::Sine)) == "sin^(N-1)");
}

TEST_CASE("interior nodes exclude two steps at interval ends") {
  const auto s = build_interval(10, 1.0);
  CHECK_FALSE(s->is_interior(0));
  CHECK_FALSE(s->is_interior(1));
  CHECK(s->is_interior(2));
  CHECK(s->is_interior(7));
  CHECK_FALSE(s->is_interior(8));
  const auto c = build_circle(10, 1.0);
  CHECK(c->is_interior(0));
}
