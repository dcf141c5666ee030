#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cryoswitch/core_model.hpp"
#include "cryoswitch/optimize.hpp"
#include "cryoswitch/waveform.hpp"

namespace cryoswitch {

using json = nlohmann::ordered_json;

// Strict readers: unknown fields and wrong types raise config_error naming the field path.
// Missing fields keep their current value, so a partial document acts as an override.
SwitchParams params_from_json(const json& j, SwitchParams base = default_params(),
                              const std::string& path = "params");
Environment environment_from_json(const json& j, Environment base = {}, const std::string& path = "env");
Waveform waveform_from_json(const json& j, const std::string& path = "waveform");
EngineeredSpec spec_from_json(const json& j, EngineeredSpec base = {}, const std::string& path = "spec");
ObjectiveWeights weights_from_json(const json& j, ObjectiveWeights base = {}, const std::string& path = "weights");

json to_json(const SwitchParams& p);
json to_json(const Environment& e);
json to_json(const Waveform& w);
json to_json(const EngineeredSpec& s);
json to_json(const ObjectiveWeights& w);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Shortest text that round-trips the double exactly.
std::string format_double(double x);
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

std::string sha256_hex(const std::string& data);

}  // namespace cryoswitch
