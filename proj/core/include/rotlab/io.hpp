#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "rotlab/alpha.hpp"
#include "rotlab/birkhoff.hpp"
#include "rotlab/convergents.hpp"
#include "rotlab/limit_law.hpp"
#include "rotlab/temporal.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

using Json = nlohmann::json;

// 17 significant digits, the CSV number format.
std::string format_double(double v);

// Accepts {"variant": "digit_rule" | "surd" | "literal" | "constructed", ...}
// or the shorthands "golden" and "sqrt2_minus_1".
AlphaSpec alpha_from_json(const Json& j);
Json alpha_to_json(const AlphaSpec& alpha);

IndexPlan plan_from_json(const Json& j);
Json plan_to_json(const IndexPlan& plan);

// Exact rational string ("1/3", "0.25") or a JSON number.
TorusPoint point_from_json(const Json& j);

// {"jumps": [{"gamma": "1/3", "H": 1.0}], "smooth": "none" | {"poly": [...]}}
// or {"builtin": "sawtooth" | "frac_squared" | "indicator", "gamma": ...}.
// The result is validated.
JumpFunction function_from_json(const Json& j);
Json function_to_json(const JumpFunction& f);

Json normal_form_to_json(const NormalForm& h);

LimitLawParams params_from_json(const Json& j);
Json params_to_json(const LimitLawParams& p);

Json bars_to_json(const BarLimits& bars);
Json report_to_json(const RefutationReport& r);
Json isolated_to_json(const IsolatedResult& r);

void write_convergents_csv(std::ostream& out, const std::vector<Convergent>& table);
void write_trace_csv(std::ostream& out, const std::vector<double>& prefix, std::uint64_t stride);
void write_ecdf_csv(std::ostream& out, const EmpiricalCDF& F);
void write_g_csv(std::ostream& out, const PiecewiseQuadratic& g, std::size_t points);
void write_law_csv(std::ostream& out, const Law& law, std::size_t points);

}  // namespace rotlab
