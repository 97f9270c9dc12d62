#pragma once

#include "hgsim/allocation.hpp"
#include "hgsim/pathing.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hgsim {

struct MissionConfig {
    // Map source: a file path, a bundled map name ("simple", "sparse50", ...)
    // or "open:WxH" for an obstacle-free grid.
    std::string map = "simple";
    int n_hunters = 4;
    int n_gatherers = 2;
    int n_baseline = 0;
    Margins hunter_margins{10, 110};
    Margins gatherer_margins{30, 40};
    double mu = 0.4;
    double rho_h = 0.2;
    double rho_g = 1.0;
    int tasks = 25;          // m_p: live tasks in perpetual mode, initial tasks otherwise
    int tau_max = 1000;
    int decay_period = 200;  // K; <= 0 disables decay
    int sensing_radius = 5;
    std::uint64_t seed = 1;
    bool perpetual = true;
    int hunter_speed = 1;
    int gatherer_speed = 1;
    bool gatherer_full_observation = false;
    Metric metric = Metric::Path;
    bool trace = true;
    // "auto" or a ';'-separated list of x,y cells assigned in agent id order.
    std::string starts = "auto";

    // Baseline agents share the gatherer margins and cost weight.
    int agent_count() const noexcept { return n_hunters + n_gatherers + n_baseline; }
};

// Known keys in snapshot order.
const std::vector<std::string>& config_keys();

void apply_setting(MissionConfig& cfg, std::string_view key, std::string_view value);
std::string get_setting(const MissionConfig& cfg, std::string_view key);

// Flat "key = value" text with '#' comments. Unknown keys are an error.
MissionConfig parse_config(std::string_view text, MissionConfig base = {});
MissionConfig load_config(const std::string& name_or_path);
std::string config_snapshot(const MissionConfig& cfg);

// Throws ConfigError describing the first violated constraint.
void validate(const MissionConfig& cfg);

// Resolves the map setting to a concrete map file path ("" for open:WxH).
std::string resolve_map_path(const std::string& map);

// Preset configurations.
MissionConfig default_config();  // full-size defaults, 100x100
MissionConfig desk_config();     // 50x50 desk-scale defaults

}  // namespace hgsim
