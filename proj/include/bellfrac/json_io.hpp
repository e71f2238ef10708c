#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bellfrac/causal_model.hpp"
#include "bellfrac/fraction.hpp"
#include "bellfrac/simulate.hpp"
#include "bellfrac/types.hpp"
#include "bellfrac/validation.hpp"

namespace bellfrac {

/// Parses text into JSON, mapping syntax errors to ParseError.
nlohmann::json parse_json(const std::string& text);

/// Statistics schema: {"nA","nB","nX","nY", "behaviour": [x][y][a][b],
/// "settings": [x][y] (optional, uniform when missing)}.
nlohmann::json to_json(const Statistics& stats);
Statistics statistics_from_json(const nlohmann::json& j);

/// Model schema: {"tag", "dims", "hidden": {"kind","size"}, "p_a": [x][l][a],
/// "p_b": [y][l][b] ( [x][y][l][b] for tag "nl"), "p_lambda": [l] ([x][l] for
/// "r"), "p_x": [x] ([l][x] for "nf"), "p_y": [y]}.
nlohmann::json to_json(const CausalModel& m);
CausalModel model_from_json(const nlohmann::json& j);

/// Fraction schema: q, status, dims, weights keyed by "f-digits|g-digits",
/// residual [x][y][a][b], dual_certificate when the scenario is 2x2x2x2.
nlohmann::json to_json(const FractionResult& fr);

nlohmann::json to_json(const SimulationReport& report);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const IndependenceReport& report);

}  // namespace bellfrac
