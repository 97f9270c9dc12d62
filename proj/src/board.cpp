#include "hgsim/board.hpp"

#include <algorithm>

namespace hgsim {

namespace {

void insert_sorted(std::vector<int>& v, int id) {
    auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it == v.end() || *it != id) v.insert(it, id);
}

void erase_sorted(std::vector<int>& v, int id) {
    auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it != v.end() && *it == id) v.erase(it);
}

bool is_known_open(Knowledge k) { return k == Knowledge::Free || k == Knowledge::Task; }

}  // namespace

const char* to_string(ClaimOutcome outcome) {
    switch (outcome) {
        case ClaimOutcome::Claimed: return "claimed";
        case ClaimOutcome::Pending: return "pending";
        case ClaimOutcome::Refused: return "refused";
    }
    return "?";
}

const char* to_string(MarginBand band) {
    switch (band) {
        case MarginBand::Cpm: return "cpm";
        case MarginBand::Upm: return "upm";
        case MarginBand::None: return "none";
    }
    return "?";
}

OnlineBoard::OnlineBoard(int width, int height, int decay_period)
    : width_(width), height_(height), decay_period_(decay_period) {
    if (width < 1 || height < 1) throw std::invalid_argument("board must be at least 1x1");
    cells_.resize(static_cast<std::size_t>(width) * height);
}

Knowledge OnlineBoard::knowledge(CellPos p) const {
    const auto& c = cells_[index(p)];
    if (c.state == Knowledge::Unknown && frontier_jobs_.contains(index(p))) return Knowledge::Frontier;
    return c.state;
}

std::optional<int> OnlineBoard::last_observed(CellPos p) const {
    int t = cells_[index(p)].last_observed;
    if (t < 0) return std::nullopt;
    return t;
}

std::optional<int> OnlineBoard::task_id_at(CellPos p) const {
    const auto& c = cells_[index(p)];
    if (c.state != Knowledge::Task) return std::nullopt;
    return c.task_id;
}

const JobRecord* OnlineBoard::find(JobKey key) const {
    const auto& jobs = key.kind == JobKind::Frontier ? frontier_jobs_ : task_jobs_;
    auto it = jobs.find(key.id);
    return it == jobs.end() ? nullptr : &it->second;
}

JobRecord* OnlineBoard::find_mutable(JobKey key) {
    auto& jobs = key.kind == JobKind::Frontier ? frontier_jobs_ : task_jobs_;
    auto it = jobs.find(key.id);
    return it == jobs.end() ? nullptr : &it->second;
}

JobKey OnlineBoard::key_of(const JobRecord& job) const {
    if (job.kind == JobKind::Frontier) return {JobKind::Frontier, index(job.pos)};
    return {JobKind::Task, job.task_id};
}

bool OnlineBoard::should_be_frontier(int idx) const {
    if (cells_[idx].state != Knowledge::Unknown) return false;
    CellPos p = pos_of(idx);
    const CellPos nbrs[4] = {{p.x, p.y - 1}, {p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y + 1}};
    for (CellPos q : nbrs)
        if (in_bounds(q) && is_known_open(cells_[index(q)].state)) return true;
    return false;
}

void OnlineBoard::refresh_frontier(int idx) {
    bool want = should_be_frontier(idx);
    auto it = frontier_jobs_.find(idx);
    if (want && it == frontier_jobs_.end()) {
        JobRecord rec;
        rec.kind = JobKind::Frontier;
        rec.pos = pos_of(idx);
        frontier_jobs_.emplace(idx, std::move(rec));
    } else if (!want && it != frontier_jobs_.end()) {
        frontier_jobs_.erase(it);
    }
}

void OnlineBoard::refresh_around(int idx) {
    refresh_frontier(idx);
    CellPos p = pos_of(idx);
    const CellPos nbrs[4] = {{p.x, p.y - 1}, {p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y + 1}};
    for (CellPos q : nbrs)
        if (in_bounds(q)) refresh_frontier(index(q));
}

void OnlineBoard::set_known(int idx, Knowledge state, int task_id, int iteration) {
    auto& c = cells_[idx];
    bool changed = c.state != state;
    c.state = state;
    c.task_id = task_id;
    c.last_observed = iteration;
    if (changed) refresh_around(idx);
}

std::vector<int> OnlineBoard::ingest_observations(std::span<const Observation> obs, int iteration) {
    std::vector<int> detected;
    for (const Observation& o : obs) {
        if (!in_bounds(o.pos)) continue;
        const int idx = index(o.pos);
        auto& c = cells_[idx];
        switch (o.kind) {
            case CellKind::Free:
            case CellKind::Obstacle:
                if (c.state == Knowledge::Task) task_jobs_.erase(c.task_id);
                set_known(idx, o.kind == CellKind::Free ? Knowledge::Free : Knowledge::Obstacle, -1, iteration);
                break;
            case CellKind::Task:
                if (c.state == Knowledge::Task && c.task_id != o.task_id) task_jobs_.erase(c.task_id);
                if (!task_jobs_.contains(o.task_id)) {
                    JobRecord rec;
                    rec.kind = JobKind::Task;
                    rec.pos = o.pos;
                    rec.task_id = o.task_id;
                    task_jobs_.emplace(o.task_id, std::move(rec));
                    detected.push_back(o.task_id);
                }
                set_known(idx, Knowledge::Task, o.task_id, iteration);
                break;
        }
    }
    return detected;
}

int OnlineBoard::decay_knowledge(int iteration) {
    if (decay_period_ <= 0) return 0;
    std::vector<int> reverted;
    for (int idx = 0; idx < static_cast<int>(cells_.size()); ++idx) {
        auto& c = cells_[idx];
        if (c.state == Knowledge::Unknown || c.last_observed < 0) continue;
        if (iteration - c.last_observed < decay_period_) continue;
        if (c.state == Knowledge::Task && task_jobs_.contains(c.task_id)) continue;
        c.state = Knowledge::Unknown;
        c.task_id = -1;
        c.last_observed = -1;
        reverted.push_back(idx);
    }
    for (int idx : reverted) refresh_around(idx);
    return static_cast<int>(reverted.size());
}

void OnlineBoard::update_margin_membership(int agent, JobKind kind, std::span<const MembershipLabel> labels) {
    auto& index_map = kind == JobKind::Frontier ? frontier_membership_ : task_membership_;
    auto& held = index_map[agent];
    for (JobKey key : held) {
        if (JobRecord* rec = find_mutable(key)) {
            erase_sorted(rec->cpm_members, agent);
            erase_sorted(rec->upm_members, agent);
        }
    }
    held.clear();
    for (const MembershipLabel& label : labels) {
        if (label.job.kind != kind || label.band == MarginBand::None) continue;
        JobRecord* rec = find_mutable(label.job);
        if (!rec) continue;
        erase_sorted(rec->cpm_members, agent);
        erase_sorted(rec->upm_members, agent);
        insert_sorted(label.band == MarginBand::Cpm ? rec->cpm_members : rec->upm_members, agent);
        held.push_back(label.job);
    }
}

ClaimOutcome OnlineBoard::try_claim(int agent, JobKey job, MarginBand level) {
    JobRecord* rec = find_mutable(job);
    if (!rec) throw StaleJob("claim on removed job " + std::to_string(job.id));
    if (level == MarginBand::None) return ClaimOutcome::Refused;

    if (rec->status == JobStatus::Claimed) {
        return rec->holder == agent ? ClaimOutcome::Claimed : ClaimOutcome::Refused;
    }
    if (level == MarginBand::Cpm) {
        rec->status = JobStatus::Claimed;
        rec->holder = agent;
        return ClaimOutcome::Claimed;
    }
    if (rec->status == JobStatus::Available) {
        rec->status = JobStatus::Pending;
        rec->holder = agent;
        return ClaimOutcome::Pending;
    }
    return rec->holder == agent ? ClaimOutcome::Pending : ClaimOutcome::Refused;
}

void OnlineBoard::release(int agent, JobKey job) {
    JobRecord* rec = find_mutable(job);
    if (!rec || rec->holder != agent) return;
    rec->status = JobStatus::Available;
    rec->holder = -1;
}

void OnlineBoard::complete_task(int task_id, int iteration) {
    auto it = task_jobs_.find(task_id);
    if (it == task_jobs_.end()) return;
    int idx = index(it->second.pos);
    task_jobs_.erase(it);
    if (cells_[idx].state == Knowledge::Task && cells_[idx].task_id == task_id)
        set_known(idx, Knowledge::Free, -1, iteration);
}

std::string OnlineBoard::dump() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(width_ + 1) * height_);
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            switch (knowledge({x, y})) {
                case Knowledge::Unknown: out.push_back('?'); break;
                case Knowledge::Frontier: out.push_back('F'); break;
                case Knowledge::Free: out.push_back('.'); break;
                case Knowledge::Obstacle: out.push_back('#'); break;
                case Knowledge::Task: out.push_back('T'); break;
            }
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace hgsim
