#include "rcdlab/serialize.hpp"

#include <charconv>
#include <cmath>

namespace rcdlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

nlohmann::ordered_json pairs_json(const std::vector<std::pair<std::string, double>>& items) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : items) obj[k] = number(v);
  return obj;
}

}  // namespace

nlohmann::ordered_json report_json(const InequalityReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["model"] = report.model;
  j["params"] = pairs_json(report.params);
  j["min_margin"] = number(report.min_margin);
  j["tolerance"] = number(report.tolerance);
  j["verdict"] = to_string(report.verdict);
  std::size_t asserted = 0;
  for (bool a : report.asserted) asserted += a ? 1 : 0;
  j["entries"] = report.margin.size();
  j["asserted_entries"] = asserted;
  if (!report.notes.empty()) j["notes"] = report.notes;
  if (!report.diagnostics.empty()) j["diagnostics"] = pairs_json(report.diagnostics);
  return j;
}

nlohmann::ordered_json model_json(const ModelSpace& space) {
  nlohmann::ordered_json j;
  j["name"] = space.model();
  j["parameters"] = pairs_json(space.parameters());
  j["n"] = space.size();
  j["h"] = number(space.spacing());
  j["topology"] = to_string(space.topology());
  if (space.expected_cd()) {
    j["expected_K"] = number(space.expected_cd()->K);
    j["expected_N"] = number(space.expected_cd()->N);
  } else {
    j["expected_K"] = nullptr;
    j["expected_N"] = nullptr;
  }
  j["fingerprint"] = space.fingerprint_hex();
  return j;
}

void write_margins_csv(std::ostream& out, const InequalityReport& report) {
  out << "index,coordinate,margin,asserted\n";
  for (std::size_t i = 0; i < report.margin.size(); ++i) {
    const double x = i < report.coordinates.size() ? report.coordinates[i] : static_cast<double>(i);
    const bool a = i < report.asserted.size() ? report.asserted[i] : true;
    out << i << ',' << format_number(x) << ',' << format_number(report.margin[i]) << ',' << (a ? 1 : 0)
        << '\n';
  }
}

void write_field_csv(std::ostream& out, const ScalarField& f) {
  const auto& space = *f.space();
  out << "node,x,mass,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << i << ',' << format_number(space.nodes()[i]) << ',' << format_number(space.measure()[i]) << ','
        << format_number(f[i]) << '\n';
}

void write_spectrum_csv(std::ostream& out, const SpectralSolver& solver) {
  out << "k,eigenvalue\n";
  const auto& ev = solver.eigenvalues();
  for (std::size_t k = 0; k < ev.size(); ++k) out << k << ',' << format_number(ev[k]) << '\n';
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  out << "i,j,mass\n";
  for (const auto& c : plan.cells) out << c.source << ',' << c.target << ',' << format_number(c.mass) << '\n';
}

void write_path_csv(std::ostream& out, const InterpolationPath& path) {
  out << "slice,t,node,density\n";
  for (std::size_t k = 0; k < path.slices.size(); ++k) {
    const auto& mu = path.slices[k];
    for (std::size_t i = 0; i < mu.size(); ++i)
      out << k << ',' << format_number(path.times[k]) << ',' << i << ',' << format_number(mu.density(i)) << '\n';
  }
}

}  // namespace rcdlab
