#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "stratawave/asymptotics.hpp"
#include "stratawave/continuation.hpp"
#include "stratawave/flowfield.hpp"
#include "stratawave/model.hpp"

namespace stratawave {

using json = nlohmann::json;

json to_json(const FluidParams& p);
// Missing keys keep their defaults; unknown keys and non-numbers are rejected.
FluidParams params_from_json(const json& j);

json to_json(const WaveProfile& profile);
WaveProfile profile_from_json(const json& j);

json to_json(const BranchPoint& p);
BranchPoint branch_point_from_json(const json& j);

json to_json(const ExpansionCoefficients& c);
json to_json(const Branch& b);
json to_json(const AnalyticityFit& f);
json to_json(const Point2& p);
json to_json(const Polyline& line);
json to_json(const StagnationReport& r);
json to_json(const Streamline& s);
json to_json(const SignCheck& c);

// %.17g; NaN and infinities are written as nan, inf, -inf.
std::string format_double(double v);

// x,y_ref,Y,psi rows (Y empty without pushforward).
std::string field_csv(const FieldGrid& grid);
// s,lambda,residual,iterations,a_1..a_N
std::string branch_csv(const Branch& branch);
// id,x,y rows, one polyline per id.
std::string polylines_csv(const std::vector<Polyline>& lines);

}  // namespace stratawave
