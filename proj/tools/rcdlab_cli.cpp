// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "rcdlab/rcdlab.h"

namespace {

void log_to_stderr(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

struct Common {
  std::string out_dir = ".";
  long long seed = -1;
  double tolerance_scale = 1.0;
  bool quiet = false;
};

rcd_run_options make_options(const Common& c) {
  rcd_run_options opt;
  rcd_run_options_init(&opt);
  opt.out_dir = c.out_dir.c_str();
  if (c.seed >= 0) {
    opt.has_seed = 1;
    opt.seed = static_cast<uint64_t>(c.seed);
  }
  opt.tolerance_scale = c.tolerance_scale;
  if (!c.quiet) opt.log = log_to_stderr;
  return opt;
}

int report(rcd_status status, int exit_code) {
  if (status != RCD_OK) {
    std::fprintf(stderr, "error (%s): %s\n", rcd_status_string(status), rcd_last_error());
    return 2;
  }
  if (exit_code == 2) std::fprintf(stderr, "config error: %s\n", rcd_last_error());
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verifiers for curvature-dimension inequalities on model spaces"};
  app.set_version_flag("--version", std::string(rcd_version()));
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", common.out_dir, "Directory for report.json, margins and sweep tables");
    sub->add_option("--seed", common.seed, "Override the scenario seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--tolerance-scale", common.tolerance_scale, "Multiply every tolerance by this factor");
    sub->add_flag("-q,--quiet", common.quiet, "Suppress progress lines");
  };

  std::string file;
  auto* run = app.add_subcommand("run", "Run every check of a scenario");
  run->add_option("file", file, "Scenario JSON file")->required();
  add_common(run);

  int levels = 0;
  auto* sweep = app.add_subcommand("sweep", "Refinement sweep with fitted convergence orders");
  sweep->add_option("file", file, "Scenario JSON file")->required();
  sweep->add_option("--levels", levels, "Number of refinement levels (>= 3); defaults to the scenario's sweep.levels or 3");
  add_common(sweep);

  app.add_subcommand("list-models", "Print the model catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int exit_code = 0;
  if (run->parsed()) {
    const rcd_run_options opt = make_options(common);
    const rcd_status status = rcd_scenario_run(file.c_str(), &opt, &exit_code);
    return report(status, exit_code);
  }
  if (sweep->parsed()) {
    const rcd_run_options opt = make_options(common);
    const rcd_status status = rcd_scenario_sweep(file.c_str(), levels, &opt, &exit_code);
    return report(status, exit_code);
  }
  size_t needed = 0;
  rcd_list_models(nullptr, 0, &needed);
  std::vector<char> buf(needed + 1);
  const rcd_status status = rcd_list_models(buf.data(), buf.size(), &needed);
  if (status != RCD_OK) return report(status, 0);
  std::fputs(buf.data(), stdout);
  return 0;
}
