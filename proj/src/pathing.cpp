#include "hgsim/pathing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace hgsim {

std::optional<Path> shortest_path(const OnlineBoard& board, CellPos from, CellPos to) {
    if (!board.in_bounds(from) || !board.in_bounds(to)) return std::nullopt;
    if (from == to) return Path{{from}};
    if (!board.traversable(to)) return std::nullopt;

    const int n = board.width() * board.height();
    std::vector<int> g(n, -1);
    std::vector<int> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);

    // (f, y, x): smallest f first, then smallest (y, x).
    using Node = std::tuple<int, int, int>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
    const int start = board.index(from);
    const int goal = board.index(to);
    g[start] = 0;
    open.emplace(manhattan(from, to), from.y, from.x);

    while (!open.empty()) {
        auto [f, y, x] = open.top();
        open.pop();
        const CellPos p{x, y};
        const int idx = board.index(p);
        if (closed[idx]) continue;
        closed[idx] = 1;
        if (idx == goal) break;
        const CellPos nbrs[4] = {{x, y - 1}, {x - 1, y}, {x + 1, y}, {x, y + 1}};
        for (CellPos q : nbrs) {
            if (!board.in_bounds(q) || !board.traversable(q)) continue;
            const int j = board.index(q);
            if (closed[j]) continue;
            const int cand = g[idx] + 1;
            if (g[j] >= 0 && g[j] <= cand) continue;
            g[j] = cand;
            parent[j] = idx;
            open.emplace(cand + manhattan(q, to), q.y, q.x);
        }
    }
    if (g[goal] < 0) return std::nullopt;

    Path path;
    for (int at = goal; at != -1; at = parent[at]) path.waypoints.push_back(board.pos_of(at));
    std::reverse(path.waypoints.begin(), path.waypoints.end());
    return path;
}

std::optional<int> travel_distance(const OnlineBoard& board, CellPos from, CellPos to) {
    auto path = shortest_path(board, from, to);
    if (!path) return std::nullopt;
    return path->length();
}

void DistanceField::compute(const OnlineBoard& board, CellPos source, int limit, Metric metric) {
    const int n = board.width() * board.height();
    if (board_ != &board || static_cast<int>(dist_.size()) != n) {
        dist_.assign(n, -1);
    } else {
        for (int idx : reached_) dist_[idx] = -1;
    }
    reached_.clear();
    board_ = &board;
    source_ = source;
    limit_ = limit;
    metric_ = metric;
    if (metric == Metric::Euclidean || limit <= 0 || !board.in_bounds(source)) return;

    const int src = board.index(source);
    dist_[src] = 0;
    reached_.push_back(src);
    for (std::size_t head = 0; head < reached_.size(); ++head) {
        const int idx = reached_[head];
        const int d = dist_[idx];
        if (d + 1 >= limit) continue;
        const CellPos p = board.pos_of(idx);
        const CellPos nbrs[4] = {{p.x, p.y - 1}, {p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y + 1}};
        for (CellPos q : nbrs) {
            if (!board.in_bounds(q) || !board.traversable(q)) continue;
            const int j = board.index(q);
            if (dist_[j] >= 0) continue;
            dist_[j] = d + 1;
            reached_.push_back(j);
        }
    }
}

std::optional<double> DistanceField::operator()(CellPos target) const {
    if (!board_ || !board_->in_bounds(target)) return std::nullopt;
    if (metric_ == Metric::Euclidean) {
        const double dx = target.x - source_.x;
        const double dy = target.y - source_.y;
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d >= limit_) return std::nullopt;
        return d;
    }
    const int d = dist_[board_->index(target)];
    if (d < 0) return std::nullopt;
    return static_cast<double>(d);
}

}  // namespace hgsim
