#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torusact/biquotient.hpp"
#include "torusact/census.hpp"
#include "torusact/orbit_space.hpp"

namespace torusact {

enum class OutputFormat { Table, Json, Csv };

OutputFormat parse_format(std::string_view name);

/// "(1,0),(0,1)" -> {{1,0},{0,1}}. Whitespace is ignored.
std::vector<IntVector> parse_tuple_list(std::string_view text);
/// "(a,b,c)" -> {a,b,c}.
IntVector parse_tuple(std::string_view text);

/// {"rank": n, "weights": [[...], ...]}
WeightedOrbitSpace orbit_space_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WeightedOrbitSpace& s);

using ActionParams = std::variant<CircleActionParams, T2ActionParams>;

/// {"kind":"circle","a":..} or {"kind":"t2","a":..,"n":..,"k":..,"m":..,"l":..}
ActionParams action_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CircleActionParams& p);
nlohmann::json to_json(const T2ActionParams& p);
nlohmann::json to_json(const Dim5Params& p);
nlohmann::json to_json(const AbelianGroup& g);

CircleActionParams circle_from_tuple(const IntVector& v);
T2ActionParams t2_from_tuple(const IntVector& v);

nlohmann::json read_json_file(const std::string& path);

/// Human-readable realizing parameters of a census row.
std::string row_params(const CensusRow& row);

void write_census(const Census& census, OutputFormat format, std::ostream& os);

}  // namespace torusact
