#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "rcdlab/heat.hpp"
#include "rcdlab/report.hpp"
#include "rcdlab/space.hpp"
#include "rcdlab/transport.hpp"

namespace rcdlab {

constexpr const char* kVersion = "0.3.0";

/// Report summary: name, model, params, min_margin, tolerance, verdict,
/// notes, diagnostics. Non-finite numbers become the strings "inf", "-inf",
/// "nan".
nlohmann::ordered_json report_json(const InequalityReport& report);

/// Model description: name, constructor parameters, n, h, expected (K, N),
/// fingerprint.
nlohmann::ordered_json model_json(const ModelSpace& space);

/// Shortest round-trip decimal text of a double.
std::string format_number(double v);

// CSV writers (header line, then one row per entry).
void write_margins_csv(std::ostream& out, const InequalityReport& report);  // index,coordinate,margin,asserted
void write_field_csv(std::ostream& out, const ScalarField& f);             // node,x,mass,value
void write_spectrum_csv(std::ostream& out, const SpectralSolver& solver);   // k,eigenvalue
void write_plan_csv(std::ostream& out, const TransportPlan& plan);          // i,j,mass
void write_path_csv(std::ostream& out, const InterpolationPath& path);      // slice,t,node,density

}  // namespace rcdlab
