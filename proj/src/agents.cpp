#include "hgsim/agents.hpp"

#include <algorithm>
#include <sstream>

namespace hgsim {

const char* to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::Hunter: return "hunter";
        case AgentKind::Gatherer: return "gatherer";
        case AgentKind::Baseline: return "baseline";
    }
    return "?";
}

void TraceLog::emit(int iteration, int agent, std::string event, std::string payload) {
    if (!enabled_) return;
    events_.push_back({iteration, agent, std::move(event), std::move(payload)});
}

std::string TraceLog::render() const {
    std::string out;
    for (const auto& e : events_) {
        out += std::to_string(e.iteration);
        out += '\t';
        out += e.agent < 0 ? std::string("-") : std::to_string(e.agent);
        out += '\t';
        out += e.event;
        out += '\t';
        out += e.payload;
        out += '\n';
    }
    return out;
}

bool selectable(const JobRecord& job, int agent, MarginBand band) {
    switch (job.status) {
        case JobStatus::Available: return true;
        case JobStatus::Pending: return job.holder == agent || band == MarginBand::Cpm;
        case JobStatus::Claimed: return job.holder == agent;
    }
    return false;
}

namespace {

std::vector<const JobRecord*> records_of(const std::map<int, JobRecord>& jobs) {
    std::vector<const JobRecord*> out;
    out.reserve(jobs.size());
    for (const auto& [id, rec] : jobs) out.push_back(&rec);
    return out;
}

std::string job_label(const OnlineBoard& board, JobKey key, CellPos pos) {
    std::string s = key.kind == JobKind::Frontier ? "frontier " : "task " + std::to_string(key.id) + " ";
    (void)board;
    return s + to_string(pos);
}

// Classifies the selectable jobs of one kind from the agent's position.
ClassifiedJobs classify_selectable(const AgentState& agent, const std::vector<const JobRecord*>& all,
                                   const DistanceField& from_agent) {
    ClassifiedJobs cls = classify(agent.margins, all, from_agent);
    auto drop = [&](std::vector<ClassifiedJob>& list, MarginBand band) {
        std::erase_if(list, [&](const ClassifiedJob& cj) {
            return cj.distance <= 0.0 || !selectable(*cj.job, agent.id, band);
        });
    };
    drop(cls.cpm, MarginBand::Cpm);
    drop(cls.upm, MarginBand::Upm);
    return cls;
}

template <typename Score>
std::optional<Selection> best_of(const std::vector<ClassifiedJob>& candidates, MarginBand band,
                                 const OnlineBoard& board, Score&& score) {
    if (candidates.empty()) return std::nullopt;
    std::vector<EgScore> scores;
    scores.reserve(candidates.size());
    for (const ClassifiedJob& cj : candidates)
        scores.push_back({board.key_of(*cj.job), cj.job->pos, cj.distance, score(cj)});
    auto best = select_best(scores);
    if (!best) return std::nullopt;
    return Selection{best->key, best->pos, band, best->distance, best->value};
}

}  // namespace

std::optional<Selection> choose_frontier(const AgentState& agent, const OnlineBoard& board, Metric metric) {
    const auto frontiers = records_of(board.frontier_jobs());
    if (frontiers.empty()) return std::nullopt;

    DistanceField from_agent;
    from_agent.compute(board, agent.pos, agent.margins.r_u, metric);
    ClassifiedJobs cls = classify_selectable(agent, frontiers, from_agent);

    DistanceField from_candidate;
    auto hood_of = [&](const ClassifiedJob& cj) {
        from_candidate.compute(board, cj.job->pos, agent.margins.r_c, metric);
        return neighborhood(*cj.job, agent.margins.r_c, frontiers, from_candidate);
    };
    if (!cls.cpm.empty()) {
        return best_of(cls.cpm, MarginBand::Cpm, board,
                       [&](const ClassifiedJob& cj) { return frontier_eg_cpm(cj.distance, hood_of(cj)); });
    }
    return best_of(cls.upm, MarginBand::Upm, board,
                   [&](const ClassifiedJob& cj) { return frontier_eg_upm(cj.distance, hood_of(cj)); });
}

std::optional<Selection> choose_task(const AgentState& agent, const OnlineBoard& board, double mu, Metric metric) {
    const auto tasks = records_of(board.task_jobs());
    if (tasks.empty()) return std::nullopt;
    const auto frontiers = records_of(board.frontier_jobs());

    DistanceField from_agent;
    from_agent.compute(board, agent.pos, agent.margins.r_u, metric);
    ClassifiedJobs cls = classify_selectable(agent, tasks, from_agent);

    DistanceField from_candidate;
    auto score = [&](const ClassifiedJob& cj, MarginBand band) {
        from_candidate.compute(board, cj.job->pos, agent.margins.r_c, metric);
        auto hood = neighborhood(*cj.job, agent.margins.r_c, tasks, from_candidate);
        int nearby = 0;
        for (const JobRecord* f : frontiers) {
            auto d = from_candidate(f->pos);
            if (d && *d < agent.margins.r_c) ++nearby;
        }
        return band == MarginBand::Cpm ? task_eg_cpm(cj.distance, hood, nearby, mu)
                                       : task_eg_upm(cj.distance, hood, nearby, mu);
    };
    if (!cls.cpm.empty()) {
        return best_of(cls.cpm, MarginBand::Cpm, board,
                       [&](const ClassifiedJob& cj) { return score(cj, MarginBand::Cpm); });
    }
    return best_of(cls.upm, MarginBand::Upm, board,
                   [&](const ClassifiedJob& cj) { return score(cj, MarginBand::Upm); });
}

void refresh_membership(const AgentState& agent, OnlineBoard& board, JobKind kind, Metric metric) {
    const auto& jobs = kind == JobKind::Frontier ? board.frontier_jobs() : board.task_jobs();
    const auto all = records_of(jobs);
    DistanceField from_agent;
    from_agent.compute(board, agent.pos, agent.margins.r_u, metric);
    ClassifiedJobs cls = classify(agent.margins, all, from_agent);
    std::vector<MembershipLabel> labels;
    labels.reserve(cls.cpm.size() + cls.upm.size());
    for (const auto& cj : cls.cpm) labels.push_back({board.key_of(*cj.job), MarginBand::Cpm});
    for (const auto& cj : cls.upm) labels.push_back({board.key_of(*cj.job), MarginBand::Upm});
    board.update_margin_membership(agent.id, kind, labels);
}

void observe(AgentState& agent, StepContext& ctx) {
    auto obs = visible_cells(ctx.truth, agent.pos, ctx.sensing_radius);
    if (agent.kind == AgentKind::Gatherer && !ctx.gatherer_full_observation) {
        std::erase_if(obs, [](const Observation& o) { return o.kind == CellKind::Free; });
    }
    for (int task_id : ctx.board.ingest_observations(obs, ctx.iteration)) {
        CellPos p = ctx.truth.tasks().at(task_id);
        auto& entry = ctx.assignments[task_id];
        entry.task_id = task_id;
        entry.pos = p;
        entry.detector = agent.id;
        entry.detected_at = ctx.iteration;
        if (agent.kind == AgentKind::Hunter) ++agent.tally;
        if (ctx.trace.enabled())
            ctx.trace.emit(ctx.iteration, agent.id, "detect", "task " + std::to_string(task_id) + " " + to_string(p));
    }
}

namespace {

void drop_buffer(AgentState& agent, StepContext& ctx, const char* reason, bool release) {
    if (!agent.buffer) return;
    if (release) ctx.board.release(agent.id, agent.buffer->key);
    if (ctx.trace.enabled())
        ctx.trace.emit(ctx.iteration, agent.id, "drop",
                       std::string(reason) + " " + job_label(ctx.board, agent.buffer->key, agent.buffer->target));
    agent.buffer.reset();
}

void take_selection(AgentState& agent, StepContext& ctx, const Selection& sel) {
    agent.buffer = JobBuffer{sel.key, sel.pos, {}, std::nullopt};
    if (ctx.trace.enabled()) {
        std::ostringstream os;
        os << job_label(ctx.board, sel.key, sel.pos) << ' ' << to_string(sel.band) << " d=" << sel.distance
           << " eg=" << sel.value;
        ctx.trace.emit(ctx.iteration, agent.id, "select", os.str());
    }
}

// Claims (or re-claims) the buffered job at the level matching its current
// distance. Returns false when the buffer had to be cleared.
bool claim_buffered(AgentState& agent, StepContext& ctx) {
    auto& buf = *agent.buffer;
    if (!ctx.board.find(buf.key)) {
        drop_buffer(agent, ctx, "vanished", false);
        return false;
    }
    DistanceField from_agent;
    from_agent.compute(ctx.board, agent.pos, agent.margins.r_u, ctx.metric);
    MarginBand level = band_of(agent.margins, from_agent(buf.target));
    if (level == MarginBand::None) level = MarginBand::Upm;
    ClaimOutcome outcome = ctx.board.try_claim(agent.id, buf.key, level);
    if (outcome != buf.last_claim) {
        buf.last_claim = outcome;
        if (ctx.trace.enabled())
            ctx.trace.emit(ctx.iteration, agent.id, "claim",
                           job_label(ctx.board, buf.key, buf.target) + " " + to_string(level) + " " +
                               to_string(outcome));
    }
    if (outcome == ClaimOutcome::Refused) {
        drop_buffer(agent, ctx, "refused", false);
        return false;
    }
    return true;
}

bool path_usable(const AgentState& agent, const OnlineBoard& board) {
    const auto& wp = agent.buffer->path.waypoints;
    if (wp.size() < 2 || wp.front() != agent.pos || wp.back() != agent.buffer->target) return false;
    return std::all_of(wp.begin() + 1, wp.end(), [&](CellPos p) { return board.traversable(p); });
}

enum class MoveResult { Moved, Blocked, Unreachable };

// One cell along the buffered path, replanning when the plan is stale.
MoveResult step_once(AgentState& agent, StepContext& ctx) {
    auto& buf = *agent.buffer;
    if (!path_usable(agent, ctx.board)) {
        auto path = shortest_path(ctx.board, agent.pos, buf.target);
        if (!path || path->length() == 0) return MoveResult::Unreachable;
        buf.path = std::move(*path);
    }
    CellPos next = buf.path.waypoints[1];
    if (ctx.truth.is_obstacle(next)) {
        // Bumped into an obstacle the board did not know about yet.
        Observation o{next, CellKind::Obstacle, -1};
        ctx.board.ingest_observations(std::span(&o, 1), ctx.iteration);
        buf.path.waypoints.clear();
        return MoveResult::Blocked;
    }
    agent.pos = next;
    buf.path.waypoints.erase(buf.path.waypoints.begin());
    ++agent.cost;
    if (ctx.trace.enabled()) ctx.trace.emit(ctx.iteration, agent.id, "move", to_string(agent.pos));
    observe(agent, ctx);
    return MoveResult::Moved;
}

void complete_task(AgentState& agent, StepContext& ctx) {
    const int task_id = agent.buffer->key.id;
    if (agent.cost == 0) agent.zero_cost_completion = true;
    ctx.truth.remove_task(task_id);
    ctx.board.complete_task(task_id, ctx.iteration);
    ++agent.tally;
    auto& entry = ctx.assignments[task_id];
    entry.task_id = task_id;
    entry.pos = agent.pos;
    entry.gatherer = agent.id;
    entry.gathered_at = ctx.iteration;
    if (ctx.trace.enabled())
        ctx.trace.emit(ctx.iteration, agent.id, "gather", "task " + std::to_string(task_id) + " " + to_string(agent.pos));
    agent.buffer.reset();
    if (ctx.perpetual) {
        CellPos p = spawn_task(ctx.truth, ctx.rng, ctx.board);
        if (ctx.trace.enabled())
            ctx.trace.emit(ctx.iteration, -1, "spawn",
                           "task " + std::to_string(ctx.truth.task_at(p).value()) + " " + to_string(p));
    }
}

// Moves toward a buffered frontier; returns the number of cells moved.
int pursue_frontier(AgentState& agent, StepContext& ctx) {
    int moved = 0;
    for (int s = 0; s < agent.speed && agent.buffer; ++s) {
        MoveResult r = step_once(agent, ctx);
        if (r == MoveResult::Unreachable) {
            drop_buffer(agent, ctx, "unreachable", true);
            break;
        }
        if (r == MoveResult::Moved) ++moved;
        if (!ctx.board.find(agent.buffer->key)) {
            if (ctx.trace.enabled())
                ctx.trace.emit(ctx.iteration, agent.id, "resolve", to_string(agent.buffer->target));
            agent.buffer.reset();
        }
    }
    return moved;
}

int pursue_task(AgentState& agent, StepContext& ctx) {
    int moved = 0;
    if (agent.pos == agent.buffer->target) {
        complete_task(agent, ctx);
        return 0;
    }
    for (int s = 0; s < agent.speed && agent.buffer; ++s) {
        MoveResult r = step_once(agent, ctx);
        if (r == MoveResult::Unreachable) {
            drop_buffer(agent, ctx, "unreachable", true);
            break;
        }
        if (r == MoveResult::Moved) ++moved;
        if (agent.pos == agent.buffer->target) {
            complete_task(agent, ctx);
            break;
        }
        if (!ctx.board.find(agent.buffer->key)) drop_buffer(agent, ctx, "vanished", false);
    }
    return moved;
}

// A detected task under the agent's feet that it may take.
std::optional<Selection> task_underfoot(const AgentState& agent, const OnlineBoard& board) {
    auto id = board.task_id_at(agent.pos);
    if (!id) return std::nullopt;
    const JobRecord* rec = board.find({JobKind::Task, *id});
    if (!rec || !selectable(*rec, agent.id, MarginBand::Cpm)) return std::nullopt;
    return Selection{{JobKind::Task, *id}, agent.pos, MarginBand::Cpm, 0.0, 0.0};
}

bool has_selectable_task(const AgentState& agent, const OnlineBoard& board, Metric metric) {
    if (board.task_jobs().empty()) return false;
    if (task_underfoot(agent, board)) return true;
    DistanceField from_agent;
    from_agent.compute(board, agent.pos, agent.margins.r_u, metric);
    auto cls = classify_selectable(agent, records_of(board.task_jobs()), from_agent);
    return !cls.cpm.empty() || !cls.upm.empty();
}

}  // namespace

void hunter_step(AgentState& agent, StepContext& ctx) {
    refresh_membership(agent, ctx.board, JobKind::Frontier, ctx.metric);
    if (agent.buffer && !ctx.board.find(agent.buffer->key)) drop_buffer(agent, ctx, "vanished", false);
    if (!agent.buffer) {
        if (auto sel = choose_frontier(agent, ctx.board, ctx.metric)) take_selection(agent, ctx, *sel);
    }
    int moved = 0;
    if (agent.buffer && claim_buffered(agent, ctx)) moved = pursue_frontier(agent, ctx);
    if (moved == 0) observe(agent, ctx);
}

void gatherer_step(AgentState& agent, StepContext& ctx, double mu) {
    refresh_membership(agent, ctx.board, JobKind::Task, ctx.metric);
    if (agent.buffer && !ctx.board.find(agent.buffer->key)) drop_buffer(agent, ctx, "vanished", false);
    if (!agent.buffer) {
        auto sel = task_underfoot(agent, ctx.board);
        if (!sel) sel = choose_task(agent, ctx.board, mu, ctx.metric);
        if (sel) take_selection(agent, ctx, *sel);
    }
    int moved = 0;
    if (agent.buffer && claim_buffered(agent, ctx)) moved = pursue_task(agent, ctx);
    if (moved == 0) observe(agent, ctx);
}

void baseline_step(AgentState& agent, StepContext& ctx) {
    refresh_membership(agent, ctx.board, JobKind::Frontier, ctx.metric);
    refresh_membership(agent, ctx.board, JobKind::Task, ctx.metric);
    if (agent.buffer && !ctx.board.find(agent.buffer->key)) drop_buffer(agent, ctx, "vanished", false);
    if (agent.buffer && agent.buffer->key.kind == JobKind::Frontier &&
        has_selectable_task(agent, ctx.board, ctx.metric)) {
        drop_buffer(agent, ctx, "switch", true);
    }
    if (!agent.buffer) {
        auto sel = task_underfoot(agent, ctx.board);
        if (!sel) sel = choose_task(agent, ctx.board, 0.0, ctx.metric);
        if (!sel) sel = choose_frontier(agent, ctx.board, ctx.metric);
        if (sel) take_selection(agent, ctx, *sel);
    }
    int moved = 0;
    if (agent.buffer && claim_buffered(agent, ctx)) {
        moved = agent.buffer->key.kind == JobKind::Task ? pursue_task(agent, ctx) : pursue_frontier(agent, ctx);
    }
    if (moved == 0) observe(agent, ctx);
}

}  // namespace hgsim
