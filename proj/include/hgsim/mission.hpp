#pragma once

#include "hgsim/agents.hpp"
#include "hgsim/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hgsim {

struct AgentSummary {
    int id = 0;
    AgentKind kind = AgentKind::Hunter;
    long long cost = 0;
    int tally = 0;
    double effectiveness = 0.0;
    bool cost_floor_applied = false;
};

struct IterationStats {
    int iteration = 0;
    int live = 0;
    int spawned = 0;
    int gathered = 0;
    double cost_t = 0.0;
};

struct MissionResult {
    std::uint64_t seed = 0;
    std::vector<AgentSummary> agents;
    AssignmentLog assignments;
    int gamma_t = 0;
    double cost_t = 0.0;
    double eta_t = 0.0;
    std::vector<IterationStats> iterations;
    int conservation_violations = 0;
    TraceLog trace{false};
    std::optional<std::string> error;

    bool ok() const noexcept { return !error.has_value(); }
};

// Runs one mission from the configuration. Configuration problems throw
// ConfigError; failures during the run (unreachable starts, spawn
// exhaustion) are reported through MissionResult::error with the partial
// trace kept.
MissionResult run_mission(const MissionConfig& config);

// Weighted collective cost: rho_h * hunter steps + rho_g * gatherer and
// baseline steps.
double collective_cost(const std::vector<AgentSummary>& agents, double rho_h, double rho_g);
double collective_cost(const MissionResult& result, double rho_h, double rho_g);

// tally / cost; 0 for an idle agent. An agent that completed work without
// moving is charged one step.
double agent_effectiveness(long long cost, int tally);

// gamma_t / cost_t, 0 when nothing was spent.
double mission_effectiveness(int gamma_t, double cost_t);

// Loads the map referenced by the configuration ("open:WxH" included).
MapData load_mission_map(const std::string& map);

// Distinct free cells nearest the map centre, (distance, y, x) order.
std::vector<CellPos> auto_starts(const GroundTruth& truth, int count, const std::vector<CellPos>& taken = {});

}  // namespace hgsim
