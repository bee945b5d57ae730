#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "powheat/lie_algebra.hpp"
#include "powheat/solutions.hpp"
#include "powheat/verify.hpp"

namespace powheat {

using nlohmann::json;

json to_json(const Generator& g);                 // {"a": real, "k": [real;4]}
Generator generator_from_json(const json& j);

json to_json(const AdjointMap& m);                // {"steps":[{"i":..,"eps":..}],"rescale":..}
AdjointMap adjoint_map_from_json(const json& j);

json to_json(const Classification& c);

/// {"a":..,"variant":..,"params":{..},"flows":[{"k":[..],"eps":..}],"domain":{..}}
json to_json(const SolutionDescriptor& sol);
SolutionDescriptor solution_from_json(const json& j);

json to_json(const ResidualReport& rep);

/// Header `t,x,u,abs_error`, 17-significant-digit decimals, LF endings.
std::string to_csv(const std::vector<GridRow>& rows);

std::string format_g17(double v);

} // namespace powheat
