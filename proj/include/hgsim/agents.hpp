#pragma once

#include "hgsim/allocation.hpp"
#include "hgsim/board.hpp"
#include "hgsim/pathing.hpp"
#include "hgsim/world.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hgsim {

enum class AgentKind : std::uint8_t { Hunter, Gatherer, Baseline };

const char* to_string(AgentKind kind);

struct JobBuffer {
    JobKey key;
    CellPos target;
    Path path;  // planned path; waypoints.front() is the agent position when non-empty
    std::optional<ClaimOutcome> last_claim;
};

struct AgentState {
    int id = 0;
    AgentKind kind = AgentKind::Hunter;
    CellPos pos;
    Margins margins;
    std::optional<JobBuffer> buffer;
    long long cost = 0;  // cells traversed
    int tally = 0;       // hunters: tasks detected; gatherers and baseline: tasks gathered
    int speed = 1;
    bool zero_cost_completion = false;  // completed a job without having moved yet
};

struct TraceEvent {
    int iteration = 0;
    int agent = -1;  // -1 for engine events
    std::string event;
    std::string payload;
};

class TraceLog {
public:
    explicit TraceLog(bool enabled = true) : enabled_(enabled) {}

    bool enabled() const noexcept { return enabled_; }
    void emit(int iteration, int agent, std::string event, std::string payload);
    const std::vector<TraceEvent>& events() const noexcept { return events_; }
    // One event per line: iter<TAB>agent<TAB>event<TAB>payload
    std::string render() const;

private:
    bool enabled_;
    std::vector<TraceEvent> events_;
};

// Realised decision variables: who detected (hunted) and who gathered each task.
struct AssignmentEntry {
    int task_id = -1;
    CellPos pos;
    int detector = -1;
    int gatherer = -1;
    int detected_at = -1;
    int gathered_at = -1;
};
using AssignmentLog = std::map<int, AssignmentEntry>;

struct StepContext {
    GroundTruth& truth;
    OnlineBoard& board;
    Rng& rng;
    TraceLog& trace;
    AssignmentLog& assignments;
    int iteration = 0;
    int sensing_radius = 5;
    Metric metric = Metric::Path;
    bool perpetual = false;
    // When false, gatherers only report the tasks and obstacles they see.
    bool gatherer_full_observation = false;
};

struct Selection {
    JobKey key;
    CellPos pos;
    MarginBand band = MarginBand::None;
    double distance = 0.0;
    double value = 0.0;
};

// Whether `agent` may select `job` found in band `band` under the claim rules.
bool selectable(const JobRecord& job, int agent, MarginBand band);

// Frontier selection: best CPM frontier by expected gain, else best UPM
// frontier, else nothing. Expects the agent's CF/UF membership to be current.
std::optional<Selection> choose_frontier(const AgentState& agent, const OnlineBoard& board,
                                         Metric metric = Metric::Path);

// Task selection with the hunter coordination term (1 + mu * frontiers nearby).
std::optional<Selection> choose_task(const AgentState& agent, const OnlineBoard& board, double mu,
                                     Metric metric = Metric::Path);

// Recomputes the agent's CPM/UPM membership for every job of `kind`.
void refresh_membership(const AgentState& agent, OnlineBoard& board, JobKind kind, Metric metric);

// Senses from the current position and writes the result to the board.
void observe(AgentState& agent, StepContext& ctx);

void hunter_step(AgentState& agent, StepContext& ctx);
void gatherer_step(AgentState& agent, StepContext& ctx, double mu);
void baseline_step(AgentState& agent, StepContext& ctx);

}  // namespace hgsim
