#pragma once

#include "upconv/counting.hpp"
#include "upconv/planner.hpp"
#include "upconv/response.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string_view>

namespace upconv {

/// Default search brackets used by front ends when none are given.
struct SolverBrackets {
    Range signal_nm{1400.0, 1700.0};
    Range pump_nm{940.0, 1020.0};
    Range temperature_c{20.0, 200.0};
};

/// Every section is optional; commands check for the ones they need.
struct RunConfig {
    std::optional<CrystalSpec> crystal;
    std::optional<PumpSource> pump;
    std::optional<DetectorChain> chain;
    std::optional<NoiseModel> noise;
    std::optional<SimConfig> sim;
    SolverBrackets brackets;
};

/// Relative "sellmeier_file" paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const WaveguideIndexModel& model);
nlohmann::json to_json(const CrystalSpec& crystal);
nlohmann::json to_json(const PumpSource& pump);
nlohmann::json to_json(const DetectorChain& chain);
nlohmann::json to_json(const NoiseModel& noise);
nlohmann::json to_json(const SimConfig& sim);
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const ChannelPlan& plan);

CrystalSpec crystal_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
PumpSource pump_from_json(const nlohmann::json& j);
DetectorChain chain_from_json(const nlohmann::json& j);
NoiseModel noise_from_json(const nlohmann::json& j);
SimConfig sim_from_json(const nlohmann::json& j);
/// Reads the schema written by to_json(ChannelPlan); channel crystals are left at defaults.
ChannelPlan plan_from_json(const nlohmann::json& j);

}  // namespace upconv
