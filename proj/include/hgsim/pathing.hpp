#pragma once

#include "hgsim/board.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hgsim {

struct Path {
    std::vector<CellPos> waypoints;
    int length() const noexcept { return waypoints.empty() ? 0 : static_cast<int>(waypoints.size()) - 1; }
};

// Minimal-step 4-neighbour path over the belief map (A*, Manhattan heuristic).
// Known obstacles block; everything else is passable. Ties between equal-f
// nodes are expanded in (y, x) order so the result is reproducible.
std::optional<Path> shortest_path(const OnlineBoard& board, CellPos from, CellPos to);

std::optional<int> travel_distance(const OnlineBoard& board, CellPos from, CellPos to);

enum class Metric : std::uint8_t { Path, Euclidean };

// Distances from a single source, valid for targets strictly closer than
// `limit`. Path mode runs one bounded BFS; Euclidean mode ignores obstacles.
class DistanceField {
public:
    DistanceField() = default;

    void compute(const OnlineBoard& board, CellPos source, int limit, Metric metric = Metric::Path);

    CellPos source() const noexcept { return source_; }
    int limit() const noexcept { return limit_; }
    std::optional<double> operator()(CellPos target) const;

    // Cell indices reached by the BFS in visiting order (path mode only).
    std::span<const int> reached() const noexcept { return reached_; }

private:
    const OnlineBoard* board_ = nullptr;
    CellPos source_;
    int limit_ = 0;
    Metric metric_ = Metric::Path;
    std::vector<int> dist_;
    std::vector<int> reached_;
};

using DistanceFn = std::function<std::optional<double>(CellPos)>;

}  // namespace hgsim
