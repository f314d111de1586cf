#pragma once

#include <json.hpp>
#include <string>

#include "depthnav/observation.hpp"
#include "depthnav/sac.hpp"

namespace depthnav {

inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointMeta {
    int format_version = kCheckpointFormatVersion;
    ObsVariant obs_variant = ObsVariant::O1;
    int env_id = 1;  // environment active when the checkpoint was written
    long episode = 0;
};

nlohmann::json mlp_to_json(const nn::Mlp& net);
nn::Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json adam_to_json(const nn::AdamState& state);
nn::AdamState adam_from_json(const nlohmann::json& j, const nn::Mlp& net);

nlohmann::json checkpoint_to_json(const SacAgent& agent, const CheckpointMeta& meta);

struct LoadedCheckpoint {
    SacAgent agent;
    CheckpointMeta meta;
};

// Throws std::runtime_error on I/O failure or format_version mismatch.
LoadedCheckpoint checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const std::string& path, const SacAgent& agent, const CheckpointMeta& meta);
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace depthnav
