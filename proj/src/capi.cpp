#include "rcdlab/rcdlab.h"

#include <algorithm>
#include <cstring>
#include <limits>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "rcdlab/error.hpp"
#include "rcdlab/heat.hpp"
#include "rcdlab/scenario.hpp"
#include "rcdlab/serialize.hpp"

struct rcd_space {
  rcdlab::SpacePtr space;
};

struct rcd_solver {
  std::shared_ptr<const rcdlab::SpectralSolver> solver;
};

struct rcd_report {
  std::vector<rcdlab::InequalityReport> reports;
};

namespace {

thread_local std::string g_last_error;

rcd_status to_status(rcdlab::ErrorCode code) {
  return static_cast<rcd_status>(static_cast<int>(code));
}

rcd_status set_error(rcd_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
rcd_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const rcdlab::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const rcdlab::ConfigError& e) {
    return set_error(RCD_E_CONFIG, e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(RCD_E_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RCD_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RCD_E_INTERNAL, e.what());
  }
}

rcd_status copy_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size();
  if (!buf || cap == 0) return set_error(RCD_E_BUFFER_TOO_SMALL, "buffer too small");
  const size_t n = std::min(cap - 1, text.size());
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
  if (n < text.size()) return set_error(RCD_E_BUFFER_TOO_SMALL, "buffer too small");
  return RCD_OK;
}

rcd_status copy_values(const std::vector<double>& v, double* out, size_t len) {
  if (!out) return set_error(RCD_E_NULL_ARGUMENT, "null output buffer");
  if (len < v.size()) return set_error(RCD_E_BUFFER_TOO_SMALL, "output buffer holds fewer values than the space");
  std::copy(v.begin(), v.end(), out);
  return RCD_OK;
}

rcdlab::RunOptions run_options(const rcd_run_options* options) {
  rcdlab::RunOptions opt;
  if (!options) return opt;
  if (options->out_dir) opt.out_dir = options->out_dir;
  if (options->has_seed) opt.seed = options->seed;
  opt.tolerance_scale = options->tolerance_scale;
  if (options->log) {
    const rcd_log_fn fn = options->log;
    void* user = options->log_user;
    opt.log = [fn, user](const std::string& line) { fn(line.c_str(), user); };
  }
  return opt;
}

rcd_status finish_run(const rcdlab::RunOutcome& outcome, int* exit_code) {
  *exit_code = outcome.exit_code;
  if (outcome.exit_code == rcdlab::kExitConfig) g_last_error = outcome.message;
  return RCD_OK;
}

}  // namespace

extern "C" {

const char* rcd_version(void) { return rcdlab::kVersion; }

const char* rcd_status_string(rcd_status status) {
  switch (status) {
    case RCD_OK: return "ok";
    case RCD_E_NULL_ARGUMENT: return "null-argument";
    case RCD_E_BUFFER_TOO_SMALL: return "buffer-too-small";
    case RCD_E_INTERNAL: return "internal";
    default: break;
  }
  if (status >= RCD_E_INVALID_GEOMETRY && status <= RCD_E_IO)
    return rcdlab::to_string(static_cast<rcdlab::ErrorCode>(static_cast<int>(status)));
  return "unknown";
}

const char* rcd_last_error(void) { return g_last_error.c_str(); }

void rcd_run_options_init(rcd_run_options* options) {
  if (!options) return;
  options->out_dir = nullptr;
  options->has_seed = 0;
  options->seed = 0;
  options->tolerance_scale = 1.0;
  options->log = nullptr;
  options->log_user = nullptr;
}

rcd_status rcd_space_create(const char* model_json, rcd_space** out) {
  if (!model_json || !out) return set_error(RCD_E_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<rcd_space>();
    handle->space = rcdlab::build_model(nlohmann::json::parse(model_json));
    *out = handle.release();
    return RCD_OK;
  });
}

void rcd_space_destroy(rcd_space* space) { delete space; }

size_t rcd_space_size(const rcd_space* space) { return space ? space->space->size() : 0; }

double rcd_space_spacing(const rcd_space* space) { return space ? space->space->spacing() : 0.0; }

rcd_status rcd_space_nodes(const rcd_space* space, double* out, size_t len) {
  if (!space) return set_error(RCD_E_NULL_ARGUMENT, "null space");
  return copy_values(space->space->nodes(), out, len);
}

rcd_status rcd_space_measure(const rcd_space* space, double* out, size_t len) {
  if (!space) return set_error(RCD_E_NULL_ARGUMENT, "null space");
  return copy_values(space->space->measure(), out, len);
}

rcd_status rcd_solver_create(const rcd_space* space, rcd_solver** out) {
  if (!space || !out) return set_error(RCD_E_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<rcd_solver>();
    handle->solver = std::make_shared<const rcdlab::SpectralSolver>(space->space);
    *out = handle.release();
    return RCD_OK;
  });
}

void rcd_solver_destroy(rcd_solver* solver) { delete solver; }

rcd_status rcd_solver_eigenvalues(const rcd_solver* solver, double* out, size_t len) {
  if (!solver) return set_error(RCD_E_NULL_ARGUMENT, "null solver");
  return copy_values(solver->solver->eigenvalues(), out, len);
}

rcd_status rcd_heat_apply(const rcd_solver* solver, const double* f, size_t len, double t, double* out) {
  if (!solver || !f || !out) return set_error(RCD_E_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& space = solver->solver->space();
    if (len != space->size()) return set_error(RCD_E_DIMENSION, "field length does not match the node count");
    const rcdlab::ScalarField field(space, std::vector<double>(f, f + len));
    const rcdlab::ScalarField u = rcdlab::heat_apply(*solver->solver, field, t);
    std::copy(u.values().begin(), u.values().end(), out);
    return RCD_OK;
  });
}

rcd_status rcd_check_run(const rcd_solver* solver, const char* check_json, const double* f, size_t len,
                         rcd_report** out) {
  if (!solver || !check_json || !f || !out) return set_error(RCD_E_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& space = solver->solver->space();
    if (len != space->size()) return set_error(RCD_E_DIMENSION, "field length does not match the node count");
    const rcdlab::CheckSpec spec = rcdlab::parse_check(nlohmann::json::parse(check_json), "check", 0);
    const rcdlab::ScalarField field(space, std::vector<double>(f, f + len));
    auto handle = std::make_unique<rcd_report>();
    handle->reports = rcdlab::run_check(*solver->solver, spec, [&](const std::string&) { return field; });
    *out = handle.release();
    return RCD_OK;
  });
}

void rcd_report_destroy(rcd_report* report) { delete report; }

rcd_verdict rcd_report_verdict(const rcd_report* report) {
  if (!report || report->reports.empty()) return RCD_VERDICT_ERROR;
  rcd_verdict worst = RCD_VERDICT_PASS;
  for (const auto& r : report->reports) {
    switch (r.verdict) {
      case rcdlab::Verdict::Error: return RCD_VERDICT_ERROR;
      case rcdlab::Verdict::Fail: worst = RCD_VERDICT_FAIL; break;
      case rcdlab::Verdict::VacuousPass:
        if (worst == RCD_VERDICT_PASS) worst = RCD_VERDICT_VACUOUS_PASS;
        break;
      case rcdlab::Verdict::OutsideProofRegime:
        if (worst != RCD_VERDICT_FAIL) worst = RCD_VERDICT_OUTSIDE_PROOF_REGIME;
        break;
      case rcdlab::Verdict::Pass: break;
    }
  }
  return worst;
}

double rcd_report_min_margin(const rcd_report* report) {
  if (!report || report->reports.empty()) return std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& r : report->reports) lo = std::min(lo, r.min_margin);
  return lo;
}

size_t rcd_report_count(const rcd_report* report) { return report ? report->reports.size() : 0; }

rcd_status rcd_report_json(const rcd_report* report, char* buf, size_t cap, size_t* needed) {
  if (!report) return set_error(RCD_E_NULL_ARGUMENT, "null report");
  return guarded([&] {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : report->reports) arr.push_back(rcdlab::report_json(r));
    return copy_text(arr.dump(), buf, cap, needed);
  });
}

rcd_status rcd_scenario_run(const char* path, const rcd_run_options* options, int* exit_code) {
  if (!path || !exit_code) return set_error(RCD_E_NULL_ARGUMENT, "null argument");
  return guarded([&] { return finish_run(rcdlab::run_scenario_file(path, run_options(options)), exit_code); });
}

rcd_status rcd_scenario_sweep(const char* path, int levels, const rcd_run_options* options, int* exit_code) {
  if (!path || !exit_code) return set_error(RCD_E_NULL_ARGUMENT, "null argument");
  return guarded(
      [&] { return finish_run(rcdlab::run_sweep_file(path, levels, run_options(options)), exit_code); });
}

rcd_status rcd_list_models(char* buf, size_t cap, size_t* needed) {
  return guarded([&] { return copy_text(rcdlab::list_models(), buf, cap, needed); });
}

}  // extern "C"
