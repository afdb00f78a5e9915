#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcdlab/heat.hpp"
#include "rcdlab/report.hpp"
#include "rcdlab/space.hpp"

namespace rcdlab {

/// Exit codes of run and sweep.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

/// Raised for unreadable, malformed or invalid scenario files. The message
/// carries a line:column anchor for syntax errors and a JSON pointer for
/// validation errors.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckSpec {
  std::string id;       ///< unique label, used for output file names
  std::string name;     ///< verifier name
  nlohmann::json args;  ///< the check object as written
  double tolerance = 0.0;
  std::string pointer;  ///< JSON pointer of the check object
};

struct Scenario {
  std::string name;
  nlohmann::json model;
  std::uint64_t seed = 0;
  nlohmann::json fields = nlohmann::json::object();  // id -> field spec
  std::vector<CheckSpec> checks;
  int sweep_levels = 3;
  std::string report_file = "report.json";
  bool write_margins = true;
};

/// Parses and validates scenario text; `origin` prefixes error messages.
Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");
Scenario load_scenario(const std::string& path);

/// Builds the model described by a model object; `n_override` replaces "n".
SpacePtr build_model(const nlohmann::json& spec, std::optional<std::size_t> n_override = std::nullopt);

/// Evaluates a field spec on a space. Random fields derive their stream from
/// `seed`.
ScalarField build_field(const SpacePtr& space, const nlohmann::json& spec, std::uint64_t seed);

/// Resolves field ids referenced by checks.
using FieldResolver = std::function<ScalarField(const std::string& id)>;

/// Runs one validated check. Most checks return one report; "kernel"
/// returns one per corollary item.
std::vector<InequalityReport> run_check(const SpectralSolver& solver, const CheckSpec& check,
                                        const FieldResolver& fields);

/// Validates one check object (name, argument names and types, tolerance).
CheckSpec parse_check(const nlohmann::json& check, const std::string& pointer, std::size_t index);

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  double tolerance_scale = 1.0;
  std::function<void(const std::string&)> log;
};

struct RunOutcome {
  int exit_code = kExitPass;
  std::string message;
  std::vector<std::string> files;
};

/// Executes every check, writes report.json and margins_<check>.csv.
RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options);
RunOutcome run_scenario_file(const std::string& path, const RunOptions& options);

/// Runs every check on n·2^ℓ nodes for ℓ < levels and writes sweep.csv with
/// columns check,level,n,h,min_margin,defect,fitted_order, defect being
/// max(0, −min_margin) and the order the least-squares slope of
/// log defect against log h. `levels` ≤ 0 takes the scenario's sweep levels.
RunOutcome run_sweep(const Scenario& scenario, int levels, const RunOptions& options);
RunOutcome run_sweep_file(const std::string& path, int levels, const RunOptions& options);

/// Least-squares slope of log y against log x over the entries with y > 0;
/// NaN when fewer than two such entries exist.
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

/// Catalog of model constructors with parameters and expected (K, N).
std::string list_models();

}  // namespace rcdlab
