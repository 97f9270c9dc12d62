#pragma once

#include "hgsim/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hgsim {

enum class Knowledge : std::uint8_t { Unknown, Free, Obstacle, Task, Frontier };

enum class JobKind : std::uint8_t { Frontier, Task };
enum class JobStatus : std::uint8_t { Available, Pending, Claimed };

// Which profit margin a job falls into from one agent's point of view.
enum class MarginBand : std::uint8_t { Cpm, Upm, None };

enum class ClaimOutcome : std::uint8_t { Claimed, Pending, Refused };

// Frontier jobs are keyed by cell index, task jobs by task id.
struct JobKey {
    JobKind kind = JobKind::Frontier;
    int id = -1;

    friend bool operator==(JobKey, JobKey) noexcept = default;
    friend auto operator<=>(JobKey, JobKey) noexcept = default;
};

struct JobRecord {
    JobKind kind = JobKind::Frontier;
    CellPos pos;
    int task_id = -1;
    std::vector<int> cpm_members;  // sorted agent ids
    std::vector<int> upm_members;  // sorted agent ids
    JobStatus status = JobStatus::Available;
    int holder = -1;  // agent owning a Pending/Claimed status

    int cf() const noexcept { return static_cast<int>(cpm_members.size()); }
    int uf() const noexcept { return static_cast<int>(upm_members.size()); }
};

struct MembershipLabel {
    JobKey job;
    MarginBand band = MarginBand::None;
};

struct StaleJob : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The shared belief map: per-cell knowledge, frontier and task job records,
// CF/UF membership and the claim lifecycle.
class OnlineBoard {
public:
    // decay_period <= 0 disables knowledge decay.
    OnlineBoard(int width, int height, int decay_period = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int decay_period() const noexcept { return decay_period_; }
    bool in_bounds(CellPos p) const noexcept {
        return p.x >= 0 && p.x < width_ && p.y >= 0 && p.y < height_;
    }
    int index(CellPos p) const noexcept { return p.y * width_ + p.x; }
    CellPos pos_of(int index) const noexcept { return {index % width_, index / width_}; }

    Knowledge knowledge(CellPos p) const;
    std::optional<int> last_observed(CellPos p) const;
    bool is_frontier(CellPos p) const { return frontier_jobs_.contains(index(p)); }
    // Planning treats everything but a known obstacle as passable.
    bool traversable(CellPos p) const {
        return cells_[index(p)].state != Knowledge::Obstacle;
    }
    std::optional<int> task_id_at(CellPos p) const;

    const std::map<int, JobRecord>& frontier_jobs() const noexcept { return frontier_jobs_; }
    const std::map<int, JobRecord>& task_jobs() const noexcept { return task_jobs_; }
    const JobRecord* find(JobKey key) const;
    JobKey key_of(const JobRecord& job) const;

    // Writes observed true kinds into the map and returns the ids of tasks
    // detected for the first time.
    std::vector<int> ingest_observations(std::span<const Observation> obs, int iteration);

    // Reverts cells not re-observed for decay_period iterations. Cells of
    // detected, live tasks are exempt. Returns the number of reverted cells.
    int decay_knowledge(int iteration);

    // Replaces the agent's CPM/UPM membership over all jobs of `kind`.
    void update_margin_membership(int agent, JobKind kind, std::span<const MembershipLabel> labels);

    ClaimOutcome try_claim(int agent, JobKey job, MarginBand level);
    // Returns a Pending/Claimed job held by `agent` to Available.
    void release(int agent, JobKey job);

    // Removes a gathered task; the cell becomes known free.
    void complete_task(int task_id, int iteration);

    // '?' unknown, 'F' frontier, '.' free, '#' obstacle, 'T' task.
    std::string dump() const;

private:
    struct BeliefCell {
        Knowledge state = Knowledge::Unknown;  // never Frontier; frontier is derived
        int last_observed = -1;
        int task_id = -1;
    };

    JobRecord* find_mutable(JobKey key);
    bool should_be_frontier(int idx) const;
    void refresh_frontier(int idx);
    void refresh_around(int idx);
    void set_known(int idx, Knowledge state, int task_id, int iteration);

    int width_;
    int height_;
    int decay_period_;
    std::vector<BeliefCell> cells_;
    std::map<int, JobRecord> frontier_jobs_;
    std::map<int, JobRecord> task_jobs_;
    std::unordered_map<int, std::vector<JobKey>> frontier_membership_;
    std::unordered_map<int, std::vector<JobKey>> task_membership_;
};

const char* to_string(ClaimOutcome outcome);
const char* to_string(MarginBand band);

}  // namespace hgsim
