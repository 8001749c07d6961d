#pragma once

#include "sage/baselines.hpp"
#include "sage/evalsuite.hpp"
#include "sage/model.hpp"
#include "sage/sampler.hpp"
#include "sage/synthetic.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace sage {

using json = nlohmann::json;

inline constexpr const char* kAttributionSchema = "sage.attribution/1";
inline constexpr const char* kBaselineSchema = "sage.baseline/1";
inline constexpr const char* kModelSchema = "sage.model/1";
inline constexpr const char* kEvalSchema = "sage.eval/1";

json to_json(const AttributionResult& result);
AttributionResult attribution_from_json(const json& j);

json to_json(const BaselineResult& result);

json spec_to_json(const SyntheticSpec& spec);
SyntheticSpec spec_from_json(const json& j);

json model_to_json(const Model& model);
ModelPtr model_from_json(const json& j);

json to_json(const CorrelationReport& report);
json to_json(const std::vector<SelectionPoint>& curve, SelectionDirection direction);
json to_json(const MonitorReport& report);
json to_json(const EfficiencyReport& report);

// Checks the embedded schema tag and the required fields of any artifact
// written by this library. Throws Error describing the first violation.
void validate_artifact(const json& j);

// Pretty-printed, newline-terminated; identical input gives identical bytes.
void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

}  // namespace sage
