#include "hgsim/world.hpp"

#include "hgsim/board.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hgsim {

std::string to_string(CellPos p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

GroundTruth::GroundTruth(int width, int height)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) throw FormatError("grid must be at least 1x1");
    obstacles_.assign(static_cast<std::size_t>(width) * height, 0);
    task_index_.assign(obstacles_.size(), -1);
}

void GroundTruth::set_obstacle(CellPos p, bool blocked) {
    if (!in_bounds(p)) throw std::out_of_range("set_obstacle: " + to_string(p));
    if (blocked && task_index_[index(p)] >= 0)
        throw std::logic_error("set_obstacle: cell holds a task " + to_string(p));
    obstacles_[index(p)] = blocked ? 1 : 0;
}

std::optional<int> GroundTruth::task_at(CellPos p) const {
    int id = task_index_[index(p)];
    if (id < 0) return std::nullopt;
    return id;
}

int GroundTruth::add_task(CellPos p) {
    if (!in_bounds(p)) throw std::out_of_range("add_task: " + to_string(p));
    if (is_obstacle(p)) throw std::logic_error("add_task: obstacle cell " + to_string(p));
    if (task_index_[index(p)] >= 0) throw std::logic_error("add_task: occupied cell " + to_string(p));
    int id = next_task_id_++;
    tasks_.emplace(id, p);
    task_index_[index(p)] = id;
    return id;
}

void GroundTruth::remove_task(int task_id) {
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) throw std::logic_error("remove_task: unknown task " + std::to_string(task_id));
    task_index_[index(it->second)] = -1;
    tasks_.erase(it);
    ++removed_;
}

MapData load_map(std::string_view text) {
    std::vector<std::string_view> rows;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view row = text.substr(start, end - start);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        rows.push_back(row);
        start = end + 1;
    }
    if (rows.empty() || rows.front().empty()) throw FormatError("map is empty");
    const std::size_t width = rows.front().size();
    for (std::size_t y = 0; y < rows.size(); ++y) {
        if (rows[y].size() != width)
            throw FormatError("ragged map: row " + std::to_string(y) + " has " +
                              std::to_string(rows[y].size()) + " cells, expected " +
                              std::to_string(width));
    }

    MapData map;
    map.truth = GroundTruth(static_cast<int>(width), static_cast<int>(rows.size()));
    for (std::size_t y = 0; y < rows.size(); ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            CellPos p{static_cast<int>(x), static_cast<int>(y)};
            switch (rows[y][x]) {
                case '.': break;
                case '#': map.truth.set_obstacle(p, true); break;
                case 'T': map.truth.add_task(p); break;
                case 'H': map.hunter_starts.push_back(p); break;
                case 'G': map.gatherer_starts.push_back(p); break;
                default:
                    throw FormatError("unknown map character '" + std::string(1, rows[y][x]) +
                                      "' at " + to_string(p));
            }
        }
    }
    return map;
}

MapData load_map_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_map(buf.str());
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

std::string serialize_map(const MapData& map) {
    const auto& gt = map.truth;
    std::string out;
    out.reserve(static_cast<std::size_t>(gt.width() + 1) * gt.height());
    std::vector<char> cells(static_cast<std::size_t>(gt.width()) * gt.height(), '.');
    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
        if (gt.is_obstacle(gt.pos_of(i))) cells[i] = '#';
    for (const auto& [id, p] : gt.tasks()) cells[gt.index(p)] = 'T';
    for (CellPos p : map.hunter_starts) cells[gt.index(p)] = 'H';
    for (CellPos p : map.gatherer_starts) cells[gt.index(p)] = 'G';
    for (int y = 0; y < gt.height(); ++y) {
        out.append(cells.begin() + y * gt.width(), cells.begin() + (y + 1) * gt.width());
        out.push_back('\n');
    }
    return out;
}

CellPos spawn_task(GroundTruth& truth, Rng& rng, const OnlineBoard& board) {
    std::vector<CellPos> unknown;
    std::vector<CellPos> eligible;
    for (int y = 0; y < truth.height(); ++y) {
        for (int x = 0; x < truth.width(); ++x) {
            CellPos p{x, y};
            if (truth.is_obstacle(p) || truth.task_at(p)) continue;
            eligible.push_back(p);
            auto k = board.knowledge(p);
            if (k == Knowledge::Unknown || k == Knowledge::Frontier) unknown.push_back(p);
        }
    }
    const auto& pool = unknown.empty() ? eligible : unknown;
    if (pool.empty()) throw SpawnExhausted("no free task-free cell left to spawn a task");
    CellPos p = pool[uniform_index(rng, pool.size())];
    truth.add_task(p);
    return p;
}

namespace {

// True when the integer line from `a` to `b` passes through an obstacle
// strictly between the endpoints.
bool ray_blocked(const GroundTruth& gt, CellPos a, CellPos b) {
    int dx = std::abs(b.x - a.x);
    int dy = -std::abs(b.y - a.y);
    int sx = a.x < b.x ? 1 : -1;
    int sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    int x = a.x;
    int y = a.y;
    while (true) {
        if (x == b.x && y == b.y) return false;
        if (!(x == a.x && y == a.y) && gt.is_obstacle({x, y})) return true;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

}  // namespace

std::vector<Observation> visible_cells(const GroundTruth& truth, CellPos pos, int radius) {
    std::vector<Observation> out;
    if (!truth.in_bounds(pos)) throw std::out_of_range("visible_cells: " + to_string(pos));
    if (radius < 0) radius = 0;
    const int r2 = radius * radius;
    for (int y = std::max(0, pos.y - radius); y <= std::min(truth.height() - 1, pos.y + radius); ++y) {
        for (int x = std::max(0, pos.x - radius); x <= std::min(truth.width() - 1, pos.x + radius); ++x) {
            int ddx = x - pos.x;
            int ddy = y - pos.y;
            if (ddx * ddx + ddy * ddy > r2) continue;
            CellPos p{x, y};
            if (ray_blocked(truth, pos, p)) continue;
            Observation o{p, CellKind::Free, -1};
            if (truth.is_obstacle(p)) {
                o.kind = CellKind::Obstacle;
            } else if (auto id = truth.task_at(p)) {
                o.kind = CellKind::Task;
                o.task_id = *id;
            }
            out.push_back(o);
        }
    }
    return out;
}

std::vector<int> free_components(const GroundTruth& truth) {
    const int n = truth.width() * truth.height();
    std::vector<int> label(n, -1);
    std::vector<int> stack;
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (label[i] >= 0 || truth.is_obstacle(truth.pos_of(i))) continue;
        label[i] = next;
        stack.push_back(i);
        while (!stack.empty()) {
            CellPos p = truth.pos_of(stack.back());
            stack.pop_back();
            const CellPos nbrs[4] = {{p.x, p.y - 1}, {p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y + 1}};
            for (CellPos q : nbrs) {
                if (!truth.in_bounds(q) || truth.is_obstacle(q)) continue;
                int j = truth.index(q);
                if (label[j] >= 0) continue;
                label[j] = next;
                stack.push_back(j);
            }
        }
        ++next;
    }
    return label;
}

int count_free_components(const GroundTruth& truth) {
    auto labels = free_components(truth);
    int m = -1;
    for (int l : labels) m = std::max(m, l);
    return m + 1;
}

}  // namespace hgsim
