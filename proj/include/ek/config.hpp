#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ek/fluid_model.hpp"

namespace ek {

// Strictly parsed run configuration: unknown keys are rejected, defaults are
// materialized, and the manifest echo reparses byte-identically.
struct RunConfig {
  std::string command;
  FluidModel model;          // as configured (not yet rescaled)
  CutoffSpec cutoff;
  nlohmann::json params;     // command block with defaults filled
  std::string output_dir = "out";
  unsigned long long rng_seed = 1;

  nlohmann::json resolved;   // full round-trippable document
};

RunConfig parse_config_json(const nlohmann::json& doc);
RunConfig parse_config(const std::string& path);

nlohmann::json model_to_json(const FluidModel& m, const CutoffSpec& spec);
void model_from_json(const nlohmann::json& j, FluidModel& m, CutoffSpec& spec);

// 17-significant-digit decimal formatting shared by every CSV writer.
std::string format_g17(double v);

}  // namespace ek
