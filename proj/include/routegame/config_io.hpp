#pragma once

#include <string>
#include <string_view>

#include "routegame/model.hpp"

namespace routegame {

// Reads a JSON object {p1, p2, t1, t2, c1, c2, V, P}. Every field is required
// and numeric, unknown keys are rejected, and the result passes GameConfig
// validation. All failures throw ValidationError.
GameConfig parse_config(std::string_view json_text);
GameConfig load_config(const std::string& path);

std::string config_to_json(const GameConfig& cfg);

}  // namespace routegame
