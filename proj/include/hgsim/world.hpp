#pragma once

#include "hgsim/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hgsim {

class OnlineBoard;

struct SpawnExhausted : MissionError {
    using MissionError::MissionError;
};

// Hidden environment: obstacle layout plus the live task population.
class GroundTruth {
public:
    GroundTruth(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool in_bounds(CellPos p) const noexcept {
        return p.x >= 0 && p.x < width_ && p.y >= 0 && p.y < height_;
    }
    int index(CellPos p) const noexcept { return p.y * width_ + p.x; }
    CellPos pos_of(int index) const noexcept { return {index % width_, index / width_}; }

    bool is_obstacle(CellPos p) const { return obstacles_[index(p)] != 0; }
    void set_obstacle(CellPos p, bool blocked);

    std::optional<int> task_at(CellPos p) const;
    const std::map<int, CellPos>& tasks() const noexcept { return tasks_; }
    int live_task_count() const noexcept { return static_cast<int>(tasks_.size()); }

    // Registers a task with a fresh id. Throws if the cell is blocked or taken.
    int add_task(CellPos p);
    // Removes a task that was gathered. Throws on unknown id.
    void remove_task(int task_id);

    int spawned() const noexcept { return next_task_id_; }
    int removed() const noexcept { return removed_; }

    int perpetual_target = 0;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> obstacles_;
    std::vector<int> task_index_;  // cell -> task id or -1
    std::map<int, CellPos> tasks_;
    int next_task_id_ = 0;
    int removed_ = 0;
};

struct MapData {
    GroundTruth truth{1, 1};
    std::vector<CellPos> hunter_starts;    // 'H' cells, row-major order
    std::vector<CellPos> gatherer_starts;  // 'G' cells, row-major order
};

// Parses the text map format: rows of '.', '#', 'T', 'H', 'G'.
MapData load_map(std::string_view text);
MapData load_map_file(const std::string& path);
std::string serialize_map(const MapData& map);

// Draws a uniformly random free, task-free cell, preferring cells the board
// still holds as unknown, and registers a new task there.
CellPos spawn_task(GroundTruth& truth, Rng& rng, const OnlineBoard& board);

// Cells within Euclidean radius whose Bresenham ray from `pos` crosses no
// obstacle strictly between the endpoints. Always contains `pos`. Sorted (y, x).
std::vector<Observation> visible_cells(const GroundTruth& truth, CellPos pos, int radius);

// Free-cell connectivity helpers.
std::vector<int> free_components(const GroundTruth& truth);  // label per cell, -1 on obstacles
int count_free_components(const GroundTruth& truth);

}  // namespace hgsim
