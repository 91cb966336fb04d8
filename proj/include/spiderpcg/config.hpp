#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "spiderpcg/experiment.hpp"

namespace spiderpcg {

/// Grid settings read from a config file, plus whether it pinned a seed.
struct LoadedGridConfig {
    GridConfig grid;
    bool has_seed = false;
};

/// Overlays the fields present in `doc` onto `base`. Field names mirror
/// GridConfig, SessionOptions, RLConfig ("rl") and GAConfig ("ga").
/// Throws std::runtime_error on unknown keys or wrong types.
LoadedGridConfig apply_grid_config(const nlohmann::json& doc, const GridConfig& base);

LoadedGridConfig load_grid_config(const std::filesystem::path& path, const GridConfig& base);

nlohmann::json grid_config_to_json(const GridConfig& cfg);

} // namespace spiderpcg
