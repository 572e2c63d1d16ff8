#include "routegame/config_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "routegame/errors.hpp"

namespace routegame {

namespace {

constexpr std::array<const char*, 8> kFields = {"p1", "p2", "t1", "t2", "c1", "c2", "V", "P"};

double field(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(std::string("config is missing field '") + key + "'");
  if (!it->is_number()) {
    throw ValidationError(std::string("config field '") + key + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

GameConfig parse_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
      throw ValidationError("config has unknown field '" + key + "'");
    }
  }
  const ModelParams m1{field(doc, "p1"), field(doc, "t1"), field(doc, "c1")};
  const ModelParams m2{field(doc, "p2"), field(doc, "t2"), field(doc, "c2")};
  return GameConfig::create(m1, m2, field(doc, "V"), field(doc, "P"));
}

GameConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const GameConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["p1"] = cfg.m1().p;
  doc["p2"] = cfg.m2().p;
  doc["t1"] = cfg.m1().t;
  doc["t2"] = cfg.m2().t;
  doc["c1"] = cfg.m1().c;
  doc["c2"] = cfg.m2().c;
  doc["V"] = cfg.value();
  doc["P"] = cfg.penalty();
  return doc.dump(2);
}

}  // namespace routegame
