#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "rcdlab/rcdlab.h"

namespace {

struct SpaceGuard {
  rcd_space* p = nullptr;
  ~SpaceGuard() { rcd_space_destroy(p); }
};
struct SolverGuard {
  rcd_solver* p = nullptr;
  ~SolverGuard() { rcd_solver_destroy(p); }
};
struct ReportGuard {
  rcd_report* p = nullptr;
  ~ReportGuard() { rcd_report_destroy(p); }
};

const std::string kFixtures = RCDLAB_FIXTURES;
const std::string kOut = RCDLAB_TEST_OUT;

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(rcd_version()) == "0.3.0");
  CHECK(std::string(rcd_status_string(RCD_OK)) == "ok");
  CHECK(std::string(rcd_status_string(RCD_E_SIZE_GUARD)) == "size-guard");
  CHECK(std::string(rcd_status_string(static_cast<rcd_status>(99))) == "unknown");
}

TEST_CASE("null arguments are rejected") {
  rcd_space* s = nullptr;
  CHECK(rcd_space_create(nullptr, &s) == RCD_E_NULL_ARGUMENT);
  CHECK(rcd_space_create("{}", nullptr) == RCD_E_NULL_ARGUMENT);
  CHECK(rcd_space_nodes(nullptr, nullptr, 0) == RCD_E_NULL_ARGUMENT);
  CHECK(rcd_solver_create(nullptr, nullptr) == RCD_E_NULL_ARGUMENT);
  CHECK(rcd_space_size(nullptr) == 0);
  CHECK(rcd_report_verdict(nullptr) == RCD_VERDICT_ERROR);
  CHECK(std::isnan(rcd_report_min_margin(nullptr)));
  int code = 0;
  CHECK(rcd_scenario_run(nullptr, nullptr, &code) == RCD_E_NULL_ARGUMENT);
  rcd_space_destroy(nullptr);
  rcd_solver_destroy(nullptr);
  rcd_report_destroy(nullptr);
}

TEST_CASE("invalid models report a status and message") {
  rcd_space* s = nullptr;
  CHECK(rcd_space_create(R"({"name": "circle", "n": 2})", &s) == RCD_E_CONFIG);
  CHECK(std::string(rcd_last_error()).find("/n") != std::string::npos);
  CHECK(rcd_space_create("{not json", &s) == RCD_E_CONFIG);
  CHECK(s == nullptr);
}

TEST_CASE("space, solver and heat flow through handles") {
  SpaceGuard s;
  REQUIRE(rcd_space_create(R"({"name": "interval", "n": 5})", &s.p) == RCD_OK);
  REQUIRE(rcd_space_size(s.p) == 5);
  CHECK(rcd_space_spacing(s.p) == doctest::Approx(M_PI / 4));
  std::vector<double> x(5), m(5);
  CHECK(rcd_space_nodes(s.p, x.data(), 4) == RCD_E_BUFFER_TOO_SMALL);
  REQUIRE(rcd_space_nodes(s.p, x.data(), x.size()) == RCD_OK);
  REQUIRE(rcd_space_measure(s.p, m.data(), m.size()) == RCD_OK);
  CHECK(x[4] == doctest::Approx(M_PI));
  CHECK(m[0] == doctest::Approx(0.125));
  CHECK(m[2] == doctest::Approx(0.25));

  SolverGuard solver;
  REQUIRE(rcd_solver_create(s.p, &solver.p) == RCD_OK);
  std::vector<double> ev(5);
  REQUIRE(rcd_solver_eigenvalues(solver.p, ev.data(), ev.size()) == RCD_OK);
  CHECK(ev[0] == 0.0);
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i] <= ev[i - 1]);

  const std::vector<double> c(5, 3.0);
  std::vector<double> u(5);
  REQUIRE(rcd_heat_apply(solver.p, c.data(), c.size(), 0.7, u.data()) == RCD_OK);
  for (double v : u) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rcd_heat_apply(solver.p, c.data(), 4, 0.7, u.data()) == RCD_E_DIMENSION);
  CHECK(rcd_heat_apply(solver.p, c.data(), c.size(), -1.0, u.data()) == RCD_E_DOMAIN);
}

TEST_CASE("single checks and report JSON") {
  SpaceGuard s;
  REQUIRE(rcd_space_create(R"({"name": "circle", "n": 64})", &s.p) == RCD_OK);
  SolverGuard solver;
  REQUIRE(rcd_solver_create(s.p, &solver.p) == RCD_OK);
  std::vector<double> f(64);
  std::vector<double> x(64);
  rcd_space_nodes(s.p, x.data(), x.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 + std::cos(x[i]);

  ReportGuard r;
  REQUIRE(rcd_check_run(solver.p, R"({"name": "li_yau", "field": "f", "T": 0.5})", f.data(), f.size(), &r.p) ==
          RCD_OK);
  CHECK(rcd_report_count(r.p) == 1);
  CHECK(rcd_report_verdict(r.p) == RCD_VERDICT_PASS);
  CHECK(rcd_report_min_margin(r.p) > 0.0);

  size_t needed = 0;
  char small[8];
  CHECK(rcd_report_json(r.p, small, sizeof small, &needed) == RCD_E_BUFFER_TOO_SMALL);
  CHECK(needed > sizeof small);
  CHECK(std::strlen(small) == sizeof small - 1);
  std::vector<char> buf(needed + 1);
  REQUIRE(rcd_report_json(r.p, buf.data(), buf.size(), &needed) == RCD_OK);
  const std::string text(buf.data());
  CHECK(text.size() == needed);
  CHECK(text.find("\"name\":\"li_yau\"") != std::string::npos);

  ReportGuard bad;
  CHECK(rcd_check_run(solver.p, R"({"name": "li_yau", "field": "f"})", f.data(), f.size(), &bad.p) == RCD_E_CONFIG);
  CHECK(std::string(rcd_last_error()).find("T") != std::string::npos);
  CHECK(rcd_check_run(solver.p, R"({"name": "bochner", "field": "f"})", f.data(), 3, &bad.p) == RCD_E_DIMENSION);
  CHECK(bad.p == nullptr);
}

TEST_CASE("scenario driver") {
  rcd_run_options opt;
  rcd_run_options_init(&opt);
  CHECK(opt.tolerance_scale == 1.0);
  const std::string out = kOut + "/capi";
  opt.out_dir = out.c_str();
  std::vector<std::string> lines;
  opt.log = [](const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); };
  opt.log_user = &lines;

  int code = -1;
  REQUIRE(rcd_scenario_run((kFixtures + "/pass_constant.json").c_str(), &opt, &code) == RCD_OK);
  CHECK(code == 0);
  CHECK_FALSE(lines.empty());
  REQUIRE(rcd_scenario_run((kFixtures + "/fail_li_yau.json").c_str(), &opt, &code) == RCD_OK);
  CHECK(code == 1);
  REQUIRE(rcd_scenario_run((kFixtures + "/malformed.json").c_str(), &opt, &code) == RCD_OK);
  CHECK(code == 2);
  CHECK(std::string(rcd_last_error()).find("malformed.json:") != std::string::npos);
  REQUIRE(rcd_scenario_run((kFixtures + "/invalid_tolerance.json").c_str(), &opt, &code) == RCD_OK);
  CHECK(code == 2);
  CHECK(std::string(rcd_last_error()).find("tolerance") != std::string::npos);
  REQUIRE(rcd_scenario_run((kFixtures + "/missing.json").c_str(), &opt, &code) == RCD_OK);
  CHECK(code == 2);
  REQUIRE(rcd_scenario_sweep((kFixtures + "/sweep_phi.json").c_str(), 0, &opt, &code) == RCD_OK);
  CHECK(code == 0);

  size_t needed = 0;
  CHECK(rcd_list_models(nullptr, 0, &needed) == RCD_E_BUFFER_TOO_SMALL);
  std::vector<char> buf(needed + 1);
  REQUIRE(rcd_list_models(buf.data(), buf.size(), &needed) == RCD_OK);
  CHECK(std::string(buf.data()).find("hyperbolic_model") != std::string::npos);
}
