#include "rcdlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "rcdlab/error.hpp"
#include "rcdlab/fields.hpp"
#include "rcdlab/inequalities.hpp"
#include "rcdlab/serialize.hpp"
#include "rcdlab/transport.hpp"

namespace rcdlab {

namespace {

using json = nlohmann::json;

enum class Kind { Number, Integer, String, Numbers, Pairs };

struct ArgSpec {
  const char* key;
  Kind kind;
  bool required;
};

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Number: return "a number";
    case Kind::Integer: return "an integer";
    case Kind::String: return "a string";
    case Kind::Numbers: return "an array of numbers";
    case Kind::Pairs: return "an array of [a, b] number pairs";
  }
  return "a value";
}

bool matches(const json& v, Kind k) {
  switch (k) {
    case Kind::Number: return v.is_number();
    case Kind::Integer: return v.is_number_integer();
    case Kind::String: return v.is_string();
    case Kind::Numbers:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
    case Kind::Pairs:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) {
               return e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number();
             });
  }
  return false;
}

[[noreturn]] void config_fail(const std::string& pointer, const std::string& msg) {
  throw ConfigError(pointer + ": " + msg);
}

void validate_object(const json& obj, const std::string& pointer, const std::vector<ArgSpec>& specs) {
  if (!obj.is_object()) config_fail(pointer, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const ArgSpec& s) { return key == s.key; });
    if (it == specs.end()) config_fail(pointer + "/" + key, "unknown key");
    if (!matches(value, it->kind)) config_fail(pointer + "/" + key, std::string("expected ") + kind_name(it->kind));
  }
  for (const auto& s : specs)
    if (s.required && !obj.contains(s.key)) config_fail(pointer, std::string("missing required key \"") + s.key + "\"");
}

struct CheckInfo {
  double default_tolerance;
  bool needs_cd;
  std::vector<ArgSpec> args;
};

const std::map<std::string, CheckInfo>& check_catalog() {
  static const std::map<std::string, CheckInfo> catalog = [] {
    const ArgSpec field{"field", Kind::String, true};
    const ArgSpec K{"K", Kind::Number, false};
    const ArgSpec N{"N", Kind::Number, false};
    std::map<std::string, CheckInfo> c;
    c["li_yau"] = {1e-6, true, {field, {"T", Kind::Number, true}, N}};
    c["bakry_qian"] = {1e-5, true, {field, {"T", Kind::Number, true}, K, N}};
    c["baudoin_garofalo"] = {1e-5, true, {field, {"T", Kind::Number, true}, K, N}};
    c["harnack"] = {1e-6, true,
                    {field, {"x", Kind::Number, true}, {"y", Kind::Number, true}, {"s", Kind::Number, true},
                     {"t", Kind::Number, true}, K, N}};
    c["harnack_scan"] = {1e-6, true,
                         {field, {"pairs", Kind::Pairs, true}, {"times", Kind::Pairs, true}, K, N}};
    c["harnack_transport"] = {1e-6, true,
                              {field, {"x", Kind::Number, true}, {"y", Kind::Number, true},
                               {"s", Kind::Number, true}, {"t", Kind::Number, true}, {"r", Kind::Number, false}, K, N}};
    c["be_flow"] = {1e-5, true, {field, {"t", Kind::Number, true}, K, N}};
    c["eks"] = {1e-5, true, {field, {"t", Kind::Number, true}, K, N}};
    c["bochner"] = {1e-3, true, {field, K, N}};
    c["phi_derivative"] = {1e-4, false,
                           {field, {"T", Kind::Number, true}, {"t", Kind::Number, true},
                            {"dt", Kind::Number, true}, {"weight", Kind::String, false}}};
    c["prop2"] = {1e-4, true,
                  {field, {"T", Kind::Number, true}, {"times", Kind::Numbers, true}, {"dt", Kind::Number, true},
                   {"weight", Kind::String, false}, K, N}};
    c["pre_li_yau"] = {1e-5, true, {field, {"T", Kind::Number, true}, {"profile", Kind::String, true}, K, N}};
    c["cd_star"] = {1e-3, true,
                    {field, {"target", Kind::String, true}, {"t", Kind::Number, true},
                     {"N_prime", Kind::Number, false}, K, N}};
    c["kernel"] = {1e-5, true, {{"x", Kind::Number, true}, {"times", Kind::Numbers, true}, K, N}};
    c["laplacian_eigen"] = {1e-2, false, {{"modes", Kind::Integer, false}}};
    for (auto& [name, info] : c) {
      info.args.push_back({"name", Kind::String, true});
      info.args.push_back({"id", Kind::String, false});
      info.args.push_back({"tolerance", Kind::Number, false});
    }
    return c;
  }();
  return catalog;
}

const std::vector<ArgSpec>& field_args(const std::string& kind) {
  static const std::map<std::string, std::vector<ArgSpec>> table = {
      {"constant", {{"value", Kind::Number, true}}},
      {"cosine",
       {{"amplitude", Kind::Number, false},
        {"frequency", Kind::Number, false},
        {"phase", Kind::Number, false},
        {"offset", Kind::Number, false}}},
      {"gaussian-bump",
       {{"center", Kind::Number, true},
        {"width", Kind::Number, true},
        {"height", Kind::Number, false},
        {"offset", Kind::Number, false}}},
      {"tabulated", {{"x", Kind::Numbers, true}, {"values", Kind::Numbers, true}}},
      {"random-smooth", {{"modes", Kind::Integer, false}, {"floor", Kind::Number, false}, {"stream", Kind::Integer, false}}},
  };
  static const std::vector<ArgSpec> none;
  const auto it = table.find(kind);
  return it == table.end() ? none : it->second;
}

const std::vector<ArgSpec>& model_args(const std::string& name) {
  static const std::map<std::string, std::vector<ArgSpec>> table = {
      {"interval", {{"n", Kind::Integer, true}, {"length", Kind::Number, false}}},
      {"circle", {{"n", Kind::Integer, true}, {"circumference", Kind::Number, false}}},
      {"sphere_model", {{"n", Kind::Integer, true}, {"N", Kind::Number, false}}},
      {"hyperbolic_model", {{"n", Kind::Integer, true}, {"N", Kind::Number, false}, {"R", Kind::Number, false}}},
      {"tabulated",
       {{"n", Kind::Integer, true},
        {"x", Kind::Numbers, true},
        {"w", Kind::Numbers, true},
        {"K", Kind::Number, false},
        {"N", Kind::Number, false}}},
  };
  static const std::vector<ArgSpec> none;
  const auto it = table.find(name);
  return it == table.end() ? none : it->second;
}

double num(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

std::vector<double> numbers(const json& v) { return v.get<std::vector<double>>(); }

std::string line_anchor(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

CurvatureDimension check_cd(const CheckSpec& check, const ModelSpace& space) {
  const auto& expected = space.expected_cd();
  const bool has_k = check.args.contains("K");
  const bool has_n = check.args.contains("N");
  if ((!has_k || !has_n) && !expected)
    throw ConfigError(check.pointer + ": model \"" + space.model() +
                      "\" declares no (K, N); give both \"K\" and \"N\"");
  const double K = has_k ? check.args.at("K").get<double>() : expected->K;
  const double N = has_n ? check.args.at("N").get<double>() : expected->N;
  if (!std::isfinite(K) || !(N > 0.0)) throw ConfigError(check.pointer + ": need finite K and N > 0");
  return CurvatureDimension{K, N};
}

std::size_t node_at(const ModelSpace& space, const json& coordinate) {
  return space.nearest_node(coordinate.get<double>());
}

std::vector<double> analytic_eigenvalues(const ModelSpace& space, int modes, const std::string& pointer) {
  std::vector<double> out;
  const auto param = [&](const char* key) {
    for (const auto& [k, v] : space.parameters())
      if (k == key) return v;
    return 0.0;
  };
  if (space.model() == "interval") {
    const double L = param("length");
    for (int k = 1; k <= modes; ++k) out.push_back(-std::pow(k * std::numbers::pi / L, 2));
  } else if (space.model() == "circle") {
    const double w = 2.0 * std::numbers::pi / param("circumference");
    for (int k = 1; out.size() < static_cast<std::size_t>(modes); ++k) {
      out.push_back(-std::pow(k * w, 2));
      if (out.size() < static_cast<std::size_t>(modes)) out.push_back(-std::pow(k * w, 2));
    }
  } else if (space.model() == "sphere_model") {
    const double N = param("N");
    for (int l = 1; l <= modes; ++l) out.push_back(-l * (l + N - 1.0));
  } else {
    throw ConfigError(pointer + ": no analytic spectrum for model \"" + space.model() + "\"");
  }
  return out;
}

InequalityReport laplacian_eigen_report(const SpectralSolver& solver, const CheckSpec& check) {
  const ModelSpace& space = *solver.space();
  const int modes = check.args.value("modes", 4);
  if (modes < 1 || static_cast<std::size_t>(modes) >= space.size())
    throw ConfigError(check.pointer + "/modes: out of range");
  const auto exact = analytic_eigenvalues(space, modes, check.pointer);
  InequalityReport r;
  r.name = "laplacian_eigen";
  r.model = space.model();
  r.params = {{"h", space.spacing()}, {"modes", static_cast<double>(modes)}, {"n", static_cast<double>(space.size())}};
  r.tolerance = check.tolerance;
  for (int k = 0; k < modes; ++k) {
    const double lam = solver.eigenvalues()[static_cast<std::size_t>(k) + 1];
    r.coordinates.push_back(k + 1);
    r.margin.push_back(-std::abs(lam - exact[static_cast<std::size_t>(k)]) / std::abs(exact[static_cast<std::size_t>(k)]));
  }
  r.asserted.assign(r.margin.size(), true);
  finalize(r);
  return r;
}

InequalityReport single_defect_report(std::string name, const ModelSpace& space, double coordinate,
                                      double defect, double tolerance) {
  InequalityReport r;
  r.name = std::move(name);
  r.model = space.model();
  r.tolerance = tolerance;
  r.coordinates = {coordinate};
  r.margin = {-defect};
  r.asserted = {true};
  return r;
}

}  // namespace

CheckSpec parse_check(const json& check, const std::string& pointer, std::size_t index) {
  if (!check.is_object()) config_fail(pointer, "expected an object");
  if (!check.contains("name") || !check.at("name").is_string()) config_fail(pointer, "missing check \"name\"");
  const std::string name = check.at("name").get<std::string>();
  const auto& catalog = check_catalog();
  const auto it = catalog.find(name);
  if (it == catalog.end()) config_fail(pointer + "/name", "unknown verifier \"" + name + "\"");
  validate_object(check, pointer, it->second.args);
  CheckSpec spec;
  spec.name = name;
  spec.args = check;
  spec.pointer = pointer;
  spec.id = check.value("id", name + "_" + std::to_string(index));
  spec.tolerance = check.value("tolerance", it->second.default_tolerance);
  if (!(spec.tolerance > 0.0) || !std::isfinite(spec.tolerance))
    config_fail(pointer + "/tolerance", "tolerances must be positive and finite");
  if (name == "pre_li_yau") {
    const std::string profile = check.at("profile");
    if (profile != "v_linear" && profile != "v_bg")
      config_fail(pointer + "/profile", "expected \"v_linear\" or \"v_bg\"");
  }
  if (name == "laplacian_eigen" && check.value("modes", 4) < 1) config_fail(pointer + "/modes", "expected modes >= 1");
  return spec;
}

SpacePtr build_model(const json& spec, std::optional<std::size_t> n_override) {
  if (!spec.is_object() || !spec.contains("name") || !spec.at("name").is_string())
    throw ConfigError("/model: expected an object with a \"name\"");
  const std::string name = spec.at("name").get<std::string>();
  json rest = spec;
  rest.erase("name");
  const auto& args = model_args(name);
  if (args.empty()) throw ConfigError("/model/name: unknown model \"" + name + "\"");
  validate_object(rest, "/model", args);
  const std::int64_t n_raw = n_override ? static_cast<std::int64_t>(*n_override) : rest.at("n").get<std::int64_t>();
  if (n_raw < 3) throw ConfigError("/model/n: need at least 3 nodes");
  const auto n = static_cast<std::size_t>(n_raw);
  try {
    if (name == "interval") return build_interval(n, num(rest, "length", std::numbers::pi));
    if (name == "circle") return build_circle(n, num(rest, "circumference", 2.0 * std::numbers::pi));
    if (name == "sphere_model") return build_sphere_model(n, num(rest, "N", 2.0));
    if (name == "hyperbolic_model") return build_hyperbolic_model(n, num(rest, "N", 2.0), num(rest, "R", 1.0));
    std::optional<CurvatureDimension> cd;
    if (rest.contains("K") != rest.contains("N")) throw ConfigError("/model: give both \"K\" and \"N\" or neither");
    if (rest.contains("K")) cd = CurvatureDimension::make(rest.at("K").get<double>(), rest.at("N").get<double>());
    return build_tabulated(n, numbers(rest.at("x")), numbers(rest.at("w")), cd);
  } catch (const Error& e) {
    throw ConfigError(std::string("/model: ") + e.what());
  }
}

ScalarField build_field(const SpacePtr& space, const json& spec, std::uint64_t seed) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant") return ScalarField(space, spec.at("value").get<double>());
  if (kind == "cosine")
    return cosine_field(space, num(spec, "amplitude", 1.0), num(spec, "frequency", 1.0), num(spec, "phase", 0.0),
                        num(spec, "offset", 0.0));
  if (kind == "gaussian-bump")
    return gaussian_bump(space, spec.at("center").get<double>(), spec.at("width").get<double>(),
                         num(spec, "height", 1.0), num(spec, "offset", 0.0));
  if (kind == "tabulated") return tabulated_field(space, numbers(spec.at("x")), numbers(spec.at("values")));
  if (kind == "random-smooth") {
    const auto stream = static_cast<std::uint64_t>(spec.value("stream", 0));
    return random_smooth_field(space, seed * 0x9E3779B97F4A7C15ULL + stream, spec.value("modes", 4),
                               num(spec, "floor", 0.1));
  }
  throw ConfigError("unknown field kind \"" + kind + "\"");
}

std::vector<InequalityReport> run_check(const SpectralSolver& solver, const CheckSpec& check,
                                        const FieldResolver& fields) {
  const ModelSpace& space = *solver.space();
  const json& a = check.args;
  const double tol = check.tolerance;
  const auto field = [&](const char* key) { return fields(a.at(key).get<std::string>()); };
  const auto weight = [&]() {
    return a.contains("weight") ? field("weight") : ScalarField(solver.space(), 1.0);
  };
  const std::string& name = check.name;
  const bool needs_cd = check_catalog().at(name).needs_cd;
  const CurvatureDimension cd = needs_cd ? check_cd(check, space) : CurvatureDimension{};

  if (name == "li_yau") return {li_yau_check(solver, field("field"), a.at("T"), cd.N, tol)};
  if (name == "bakry_qian") return {bakry_qian_check(solver, field("field"), a.at("T"), cd, tol)};
  if (name == "baudoin_garofalo") return {baudoin_garofalo_check(solver, field("field"), a.at("T"), cd, tol)};
  if (name == "harnack")
    return {harnack_check(solver, field("field"), node_at(space, a.at("x")), node_at(space, a.at("y")), a.at("s"),
                          a.at("t"), cd, tol)};
  if (name == "harnack_scan") {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& p : a.at("pairs")) pairs.emplace_back(node_at(space, p[0]), node_at(space, p[1]));
    std::vector<std::pair<double, double>> times;
    for (const auto& p : a.at("times")) times.emplace_back(p[0].get<double>(), p[1].get<double>());
    return {harnack_scan(solver, field("field"), pairs, times, cd, tol)};
  }
  if (name == "harnack_transport") {
    HarnackTransportParams p;
    p.x = node_at(space, a.at("x"));
    p.y = node_at(space, a.at("y"));
    p.s = a.at("s");
    p.t = a.at("t");
    p.r = num(a, "r", 2.0 * space.spacing());
    p.tolerance = tol;
    return {harnack_transport_check(solver, field("field"), p, cd)};
  }
  if (name == "be_flow") return {be_flow_check(solver, field("field"), a.at("t"), cd, tol)};
  if (name == "eks") return {eks_check(solver, field("field"), a.at("t"), cd, tol)};
  if (name == "bochner") return {bochner_check(space, field("field"), cd, tol)};
  if (name == "phi_derivative") {
    const double T = a.at("T");
    const double t = a.at("t");
    const double dt = a.at("dt");
    const PhiDerivativeDefect d = phi_derivative_check(solver, field("field"), T, t, weight(), dt);
    InequalityReport r = single_defect_report("phi_derivative", space, t, d.defect, tol);
    r.params = {{"T", T}, {"dt", dt}, {"h", space.spacing()}, {"n", static_cast<double>(space.size())}, {"t", t}};
    r.diagnostics = {{"central", d.central}, {"exact", d.exact}, {"identity", d.identity},
                     {"stencil_part", d.stencil}, {"discretization_part", d.floor}};
    finalize(r);
    return {r};
  }
  if (name == "prop2") {
    const double T = a.at("T");
    return {prop2_check(solver, field("field"), T, quadratic_defgamma_profile(T, cd), weight(),
                        numbers(a.at("times")), a.at("dt"), cd, tol)};
  }
  if (name == "pre_li_yau") {
    const double T = a.at("T");
    const std::string profile = a.at("profile");
    const VProfile V = profile == "v_linear" ? v_linear(T) : v_bg(T, cd.K);
    return {pre_li_yau_check(solver, field("field"), T, V, cd, tol)};
  }
  if (name == "cd_star") {
    const double t = a.at("t");
    const double Np = num(a, "N_prime", cd.N);
    const auto mu0 = DiscreteMeasure::from_density(field("field"));
    const auto mu1 = DiscreteMeasure::from_density(field("target"));
    const CdStarResult res = cd_star_check(mu0, mu1, t, cd, Np);
    InequalityReport r = single_defect_report("cd_star", space, t, -res.margin, tol);
    r.params = {{"K", cd.K}, {"N", cd.N}, {"N_prime", Np}, {"h", space.spacing()},
                {"n", static_cast<double>(space.size())}, {"t", t}};
    r.diagnostics = {{"lhs", res.lhs}, {"rhs", res.rhs}};
    if (res.vacuous) {
      r.verdict = Verdict::VacuousPass;
      r.notes = "distortion coefficient on the infinite branch";
    }
    finalize(r);
    return {r};
  }
  if (name == "kernel")
    return kernel_corollary_suite(solver, node_at(space, a.at("x")), cd, numbers(a.at("times")), tol);
  if (name == "laplacian_eigen") return {laplacian_eigen_report(solver, check)};
  throw ConfigError(check.pointer + ": unknown verifier \"" + name + "\"");
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ":" + line_anchor(text, e.byte) + ": JSON syntax error: " + e.what());
  }
  try {
    static const std::vector<std::string> known = {"name", "model", "seed", "fields", "checks", "sweep", "outputs"};
    if (!doc.is_object()) config_fail("", "expected a JSON object at top level");
    for (const auto& [key, value] : doc.items())
      if (std::find(known.begin(), known.end(), key) == known.end()) config_fail("/" + key, "unknown key");
    for (const char* key : {"model", "checks"})
      if (!doc.contains(key)) config_fail("", std::string("missing required key \"") + key + "\"");

    Scenario sc;
    sc.name = doc.value("name", std::string("scenario"));
    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned()) config_fail("/seed", "expected a nonnegative integer");
      sc.seed = doc.at("seed").get<std::uint64_t>();
    }
    sc.model = doc.at("model");
    build_model(sc.model);

    if (doc.contains("fields")) {
      const json& fields = doc.at("fields");
      if (!fields.is_object()) config_fail("/fields", "expected an object mapping ids to field specs");
      for (const auto& [id, spec] : fields.items()) {
        const std::string ptr = "/fields/" + id;
        if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string())
          config_fail(ptr, "expected an object with a \"kind\"");
        const std::string kind = spec.at("kind").get<std::string>();
        auto args = field_args(kind);
        if (args.empty()) config_fail(ptr + "/kind", "unknown field kind \"" + kind + "\"");
        args.push_back({"kind", Kind::String, true});
        validate_object(spec, ptr, args);
      }
      sc.fields = fields;
    }

    const json& checks = doc.at("checks");
    if (!checks.is_array() || checks.empty()) config_fail("/checks", "expected a nonempty array");
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      CheckSpec spec = parse_check(checks[i], "/checks/" + std::to_string(i), i);
      for (const char* key : {"field", "target", "weight"})
        if (spec.args.contains(key) && !sc.fields.contains(spec.args.at(key).get<std::string>()))
          config_fail(spec.pointer + "/" + key, "unknown field id \"" + spec.args.at(key).get<std::string>() + "\"");
      if (std::find(ids.begin(), ids.end(), spec.id) != ids.end())
        config_fail(spec.pointer + "/id", "duplicate check id \"" + spec.id + "\"");
      ids.push_back(spec.id);
      sc.checks.push_back(std::move(spec));
    }

    if (doc.contains("sweep")) {
      const json& sweep = doc.at("sweep");
      validate_object(sweep, "/sweep", {{"levels", Kind::Integer, false}});
      sc.sweep_levels = sweep.value("levels", 3);
    }
    if (doc.contains("outputs")) {
      const json& out = doc.at("outputs");
      validate_object(out, "/outputs", {{"report", Kind::String, false}, {"margins", Kind::String, false}});
      sc.report_file = out.value("report", sc.report_file);
      if (out.contains("margins")) {
        const std::string m = out.at("margins");
        if (m != "on" && m != "off") config_fail("/outputs/margins", "expected \"on\" or \"off\"");
        sc.write_margins = m == "on";
      }
    }
    return sc;
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

namespace {

struct Workspace {
  SpacePtr space;
  std::unique_ptr<SpectralSolver> solver;
  std::map<std::string, ScalarField> fields;
};

Workspace prepare(const Scenario& sc, std::uint64_t seed, std::optional<std::size_t> n) {
  Workspace w;
  w.space = build_model(sc.model, n);
  for (const auto& check : sc.checks)
    if (check_catalog().at(check.name).needs_cd) check_cd(check, *w.space);
  w.solver = std::make_unique<SpectralSolver>(w.space);
  for (const auto& [id, spec] : sc.fields.items()) {
    try {
      w.fields.emplace(id, build_field(w.space, spec, seed));
    } catch (const Error& e) {
      throw ConfigError("/fields/" + id + ": " + e.what());
    }
  }
  return w;
}

std::vector<InequalityReport> execute(const Workspace& w, const CheckSpec& check, double scale) {
  CheckSpec scaled = check;
  scaled.tolerance = check.tolerance * scale;
  const FieldResolver resolve = [&](const std::string& id) { return w.fields.at(id); };
  try {
    return run_check(*w.solver, scaled, resolve);
  } catch (const Error& e) {
    InequalityReport r;
    r.name = check.name;
    r.model = w.space->model();
    r.tolerance = scaled.tolerance;
    r.verdict = Verdict::Error;
    r.min_margin = std::numeric_limits<double>::quiet_NaN();
    r.notes = std::string(to_string(e.code())) + ": " + e.what();
    return {r};
  }
}

bool is_failure(Verdict v) { return v == Verdict::Fail || v == Verdict::Error; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void log_line(const RunOptions& opt, const std::string& line) {
  if (opt.log) opt.log(line);
}

void check_options(const RunOptions& opt) {
  if (!(opt.tolerance_scale > 0.0) || !std::isfinite(opt.tolerance_scale))
    throw ConfigError("--tolerance-scale must be positive and finite");
}

std::string safe_name(const std::string& id) {
  std::string s = id;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  return s;
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, const RunOptions& opt) {
  RunOutcome outcome;
  std::filesystem::path dir;
  Workspace w;
  const std::uint64_t seed = opt.seed.value_or(sc.seed);
  try {
    check_options(opt);
    dir = opt.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(opt.out_dir);
    std::filesystem::create_directories(dir);
    w = prepare(sc, seed, std::nullopt);
  } catch (const ConfigError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  } catch (const std::filesystem::filesystem_error& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }

  struct Entry {
    std::string check;
    InequalityReport report;
  };
  std::vector<Entry> entries;
  try {
    for (const auto& check : sc.checks) {
      auto reports = execute(w, check, opt.tolerance_scale);
      for (auto& r : reports) {
        log_line(opt, check.id + " " + r.name + " " + to_string(r.verdict) + " min_margin=" + format_number(r.min_margin));
        entries.push_back({check.id, std::move(r)});
      }
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }

  // Output names follow scenario order; the report lists entries canonically.
  std::map<std::string, int> per_check;
  for (const auto& e : entries) ++per_check[e.check];
  std::map<std::string, int> seen;
  std::vector<std::pair<const Entry*, std::string>> named;
  for (const auto& e : entries) {
    std::string file = "margins_" + safe_name(e.check);
    if (per_check[e.check] > 1) file += "_" + std::to_string(seen[e.check]++);
    named.emplace_back(&e, file + ".csv");
  }
  std::stable_sort(named.begin(), named.end(), [](const auto& a, const auto& b) {
    if (report_less(a.first->report, b.first->report)) return true;
    if (report_less(b.first->report, a.first->report)) return false;
    return a.first->check < b.first->check;
  });

  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["scenario"] = sc.name;
  doc["seed"] = seed;
  doc["tolerance_scale"] = opt.tolerance_scale;
  doc["model"] = model_json(*w.space);
  std::map<std::string, int> counts;
  bool failed = false;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& [entry, file] : named) {
    nlohmann::ordered_json j;
    j["check"] = entry->check;
    for (const auto rj = report_json(entry->report); const auto& [k, v] : rj.items()) j[k] = v;
    if (sc.write_margins && !entry->report.margin.empty()) j["margins_file"] = file;
    reports.push_back(std::move(j));
    ++counts[to_string(entry->report.verdict)];
    failed = failed || is_failure(entry->report.verdict);
  }
  doc["reports"] = std::move(reports);
  nlohmann::ordered_json summary;
  summary["reports"] = entries.size();
  for (const char* v : {"pass", "fail", "error", "vacuous-pass", "outside-proof-regime"}) summary[v] = counts[v];
  doc["summary"] = std::move(summary);
  outcome.exit_code = failed ? kExitFail : kExitPass;
  doc["exit_code"] = outcome.exit_code;

  try {
    const auto report_path = dir / sc.report_file;
    write_text(report_path, doc.dump(2) + "\n");
    outcome.files.push_back(report_path.string());
    if (sc.write_margins) {
      for (const auto& [entry, file] : named) {
        if (entry->report.margin.empty()) continue;
        std::ostringstream csv;
        write_margins_csv(csv, entry->report);
        write_text(dir / file, csv.str());
        outcome.files.push_back((dir / file).string());
      }
    }
  } catch (const Error& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }
  outcome.message = std::to_string(entries.size()) + " reports, " + std::to_string(counts["fail"]) + " failed, " +
                    std::to_string(counts["error"]) + " errors";
  return outcome;
}

RunOutcome run_scenario_file(const std::string& path, const RunOptions& opt) {
  try {
    return run_scenario(load_scenario(path), opt);
  } catch (const ConfigError& e) {
    return RunOutcome{kExitConfig, e.what(), {}};
  }
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

RunOutcome run_sweep(const Scenario& sc, int levels, const RunOptions& opt) {
  RunOutcome outcome;
  struct Row {
    std::string check;
    int level;
    std::size_t n;
    double h;
    double min_margin;
    double defect;
  };
  std::vector<Row> rows;
  bool errored = false;
  std::filesystem::path dir;
  try {
    check_options(opt);
    if (levels <= 0) levels = sc.sweep_levels;
    if (levels < 3) throw ConfigError("sweep needs at least 3 levels");
    dir = opt.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(opt.out_dir);
    std::filesystem::create_directories(dir);
    const std::size_t n0 = build_model(sc.model)->size();
    const std::uint64_t seed = opt.seed.value_or(sc.seed);
    for (int level = 0; level < levels; ++level) {
      const std::size_t n = n0 << level;
      const Workspace w = prepare(sc, seed, n);
      log_line(opt, "level " + std::to_string(level) + ": n=" + std::to_string(n));
      for (const auto& check : sc.checks) {
        const auto reports = execute(w, check, opt.tolerance_scale);
        for (std::size_t k = 0; k < reports.size(); ++k) {
          const auto& r = reports[k];
          errored = errored || r.verdict == Verdict::Error;
          std::string label = check.id;
          if (reports.size() > 1) label += "/" + r.name + "_" + std::to_string(k);
          const double defect = std::isnan(r.min_margin) ? r.min_margin : std::max(0.0, -r.min_margin);
          rows.push_back({label, level, n, w.space->spacing(), r.min_margin, defect});
        }
      }
    }
  } catch (const ConfigError& e) {
    return RunOutcome{kExitConfig, e.what(), {}};
  } catch (const std::filesystem::filesystem_error& e) {
    return RunOutcome{kExitConfig, e.what(), {}};
  }

  std::map<std::string, double> orders;
  {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
    for (const auto& r : rows) {
      series[r.check].first.push_back(r.h);
      series[r.check].second.push_back(r.defect);
    }
    for (const auto& [label, s] : series) orders[label] = fitted_order(s.first, s.second);
  }
  std::ostringstream csv;
  csv << "check,level,n,h,min_margin,defect,fitted_order\n";
  for (const auto& r : rows)
    csv << r.check << ',' << r.level << ',' << r.n << ',' << format_number(r.h) << ',' << format_number(r.min_margin)
        << ',' << format_number(r.defect) << ',' << format_number(orders[r.check]) << '\n';
  for (const auto& [label, p] : orders) log_line(opt, label + " fitted_order=" + format_number(p));
  try {
    write_text(dir / "sweep.csv", csv.str());
  } catch (const Error& e) {
    return RunOutcome{kExitConfig, e.what(), {}};
  }
  outcome.files.push_back((dir / "sweep.csv").string());
  outcome.exit_code = errored ? kExitFail : kExitPass;
  outcome.message = std::to_string(rows.size()) + " sweep rows";
  return outcome;
}

RunOutcome run_sweep_file(const std::string& path, int levels, const RunOptions& opt) {
  try {
    return run_sweep(load_scenario(path), levels, opt);
  } catch (const ConfigError& e) {
    return RunOutcome{kExitConfig, e.what(), {}};
  }
}

std::string list_models() {
  std::ostringstream out;
  out << "model             parameters                          expected (K, N)\n";
  out << "circle            n, circumference = 2*pi              (0, 1)\n";
  out << "hyperbolic_model  n, N = 2, R = 1                      (-(N-1), N)\n";
  out << "interval          n, length = pi                       (0, 1)\n";
  out << "sphere_model      n, N = 2                             (N-1, N)\n";
  out << "tabulated         n, x[], w[], K?, N?                  (K, N) if declared, else none\n";
  return out.str();
}

}  // namespace rcdlab
