#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "salvo/simulator.hpp"

namespace salvo::cli {

struct Overrides {
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> law;
    std::optional<double> ts;
};

// Parses JSON text. Syntax errors become Error(validation) carrying
// "<source>:<line>:<column>".
nlohmann::json parse_document(std::string_view text, const std::string& source);

// Returns the document after overrides have been written into it, so that the
// echo in events.json is exactly what was run.
nlohmann::json apply_overrides(nlohmann::json doc, const Overrides& ov);

// Builds the scenario from a document. Angles are in degrees. Unknown keys and
// wrongly typed values are rejected with the JSON path in the message.
Scenario build_scenario(const nlohmann::json& doc);

// A preset name or a file path. Throws Error(io) when neither resolves.
struct ScenarioSource {
    std::string text;
    std::string origin;  // "preset:<name>" or the file path
};
ScenarioSource resolve_scenario(const std::string& name_or_path);

struct LoadedScenario {
    nlohmann::json doc;
    Scenario scenario;
};

// resolve + parse + overrides + build + validate_scenario.
LoadedScenario load_scenario(const std::string& name_or_path, const Overrides& ov = {});

// Bundled presets, compiled into the binary.
struct Preset {
    std::string_view name;
    std::string_view text;
};
const std::vector<Preset>& presets();

}  // namespace salvo::cli
