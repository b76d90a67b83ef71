#pragma once

#include "tdl/circle.hpp"
#include "tdl/duals.hpp"
#include "tdl/finite_ot.hpp"
#include "tdl/gap.hpp"
#include "tdl/report.hpp"
#include "tdl/tau.hpp"

#include <json.hpp>

#include <string>

// Serialization. Rationals are canonical "p/q" strings, +inf is "inf", object keys are sorted.
namespace tdl::io {

using Json = nlohmann::json;

struct Instance {
    ot::CostMatrix cost;
    ot::Marginals marg;
};

// {"n": int, "cost": [[...]], "mu": [...], "nu": [...]}; throws ParseError.
Instance parse_instance(const std::string& text);
Instance read_instance(const std::string& path);
Json instance_json(const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);
// Pretty JSON text with a trailing newline.
std::string dump(const Json& j);

Json rational_json(const Rational& r);
Rational rational_from(const Json& j);

Json report_json(const Report& r);

Json tower_json(const circle::Tower& t);
circle::Tower tower_from(const Json& j);

// Columns: index,left_endpoint,value.
std::string step_function_csv(const circle::StepFunction& f);

// tau and labels are stored as runs [start, length, value].
Json tau_level_json(const tau::TauLevel& level);
// Recomputes sigma from tau on the given tower.
tau::TauLevel tau_level_from(const Json& j, const circle::Tower& t);

Json ledger_json(const tau::SingularLedger& g);
// One JSON line: level, dual_value, correction_norm, carrier_measure, negative_mass, small_set_sup.
std::string diagnostics_line(const duals::DualPairLevel& pair, const duals::SingularDiagnostic& d);

Json plan_json(const ot::TransportPlan& plan);
Json duals_json(const ot::DualPair& duals);

Json gap_report_json(const gap::GapReport& g);

}  // namespace tdl::io
