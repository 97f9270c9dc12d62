#include "hgsim/mission.hpp"

#include <algorithm>
#include <charconv>

namespace hgsim {

double collective_cost(const std::vector<AgentSummary>& agents, double rho_h, double rho_g) {
    long long hunters = 0;
    long long others = 0;
    for (const auto& a : agents) (a.kind == AgentKind::Hunter ? hunters : others) += a.cost;
    return rho_h * static_cast<double>(hunters) + rho_g * static_cast<double>(others);
}

double collective_cost(const MissionResult& result, double rho_h, double rho_g) {
    return collective_cost(result.agents, rho_h, rho_g);
}

double agent_effectiveness(long long cost, int tally) {
    if (tally <= 0) return 0.0;
    return static_cast<double>(tally) / static_cast<double>(std::max<long long>(cost, 1));
}

double mission_effectiveness(int gamma_t, double cost_t) {
    if (cost_t <= 0.0) return 0.0;
    return gamma_t / cost_t;
}

MapData load_mission_map(const std::string& map) {
    if (map.rfind("open:", 0) == 0) {
        std::string_view dims(map);
        dims.remove_prefix(5);
        auto x = dims.find('x');
        int w = 0;
        int h = 0;
        if (x == std::string_view::npos ||
            std::from_chars(dims.data(), dims.data() + x, w).ec != std::errc() ||
            std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), h).ec != std::errc() || w < 1 ||
            h < 1)
            throw ConfigError("bad open map '" + map + "', expected open:WxH");
        MapData data;
        data.truth = GroundTruth(w, h);
        return data;
    }
    const std::string path = resolve_map_path(map);
    try {
        return load_map_file(path);
    } catch (const FormatError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<CellPos> auto_starts(const GroundTruth& truth, int count, const std::vector<CellPos>& taken) {
    // Doubled coordinates keep the centre integral for even sizes.
    const int cx2 = truth.width() - 1;
    const int cy2 = truth.height() - 1;
    std::vector<std::pair<long long, CellPos>> cells;
    for (int y = 0; y < truth.height(); ++y) {
        for (int x = 0; x < truth.width(); ++x) {
            CellPos p{x, y};
            if (truth.is_obstacle(p) || std::find(taken.begin(), taken.end(), p) != taken.end()) continue;
            long long dx = 2LL * x - cx2;
            long long dy = 2LL * y - cy2;
            cells.push_back({dx * dx + dy * dy, p});
        }
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    std::vector<CellPos> out;
    for (int i = 0; i < count && i < static_cast<int>(cells.size()); ++i) out.push_back(cells[i].second);
    return out;
}

namespace {

std::vector<CellPos> parse_start_list(const std::string& text) {
    std::vector<CellPos> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        std::string item = text.substr(start, end - start);
        start = end + 1;
        if (item.empty()) continue;
        auto comma = item.find(',');
        CellPos p;
        if (comma == std::string::npos ||
            std::from_chars(item.data(), item.data() + comma, p.x).ec != std::errc() ||
            std::from_chars(item.data() + comma + 1, item.data() + item.size(), p.y).ec != std::errc())
            throw ConfigError("bad start cell '" + item + "', expected x,y");
        out.push_back(p);
    }
    return out;
}

std::vector<CellPos> choose_starts(const MissionConfig& cfg, const MapData& map, const std::vector<AgentKind>& kinds,
                                   Rng& rng) {
    if (cfg.starts != "auto") {
        auto list = parse_start_list(cfg.starts);
        if (static_cast<int>(list.size()) != cfg.agent_count())
            throw ConfigError("starts lists " + std::to_string(list.size()) + " cells for " +
                              std::to_string(cfg.agent_count()) + " agents");
        return list;
    }
    std::vector<std::optional<CellPos>> chosen(kinds.size());
    std::size_t next_h = 0;
    std::size_t next_g = 0;
    std::vector<CellPos> taken;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (kinds[i] == AgentKind::Gatherer) {
            if (next_g < map.gatherer_starts.size()) chosen[i] = map.gatherer_starts[next_g++];
        } else if (next_h < map.hunter_starts.size()) {
            chosen[i] = map.hunter_starts[next_h++];
        }
        if (chosen[i]) taken.push_back(*chosen[i]);
    }
    int missing = static_cast<int>(std::count(chosen.begin(), chosen.end(), std::nullopt));
    auto fill = auto_starts(map.truth, missing, taken);
    // The centre cells are dealt to agents in a seeded order so that no agent id
    // is tied to one fixed spot across a batch.
    for (std::size_t i = fill.size(); i > 1; --i) std::swap(fill[i - 1], fill[uniform_index(rng, i)]);
    std::size_t next = 0;
    std::vector<CellPos> out;
    for (auto& c : chosen) {
        if (!c) {
            if (next >= fill.size()) throw ConfigError("map has too few free cells for all agents");
            c = fill[next++];
        }
        out.push_back(*c);
    }
    return out;
}

}  // namespace

MissionResult run_mission(const MissionConfig& cfg) {
    validate(cfg);
    MapData map = load_mission_map(cfg.map);
    GroundTruth& truth = map.truth;
    truth.perpetual_target = cfg.perpetual ? cfg.tasks : 0;
    OnlineBoard board(truth.width(), truth.height(), cfg.perpetual ? cfg.decay_period : 0);
    Rng rng(cfg.seed);

    MissionResult result;
    result.seed = cfg.seed;
    result.trace = TraceLog(cfg.trace);

    std::vector<AgentKind> kinds;
    kinds.insert(kinds.end(), cfg.n_hunters, AgentKind::Hunter);
    kinds.insert(kinds.end(), cfg.n_gatherers, AgentKind::Gatherer);
    kinds.insert(kinds.end(), cfg.n_baseline, AgentKind::Baseline);
    const auto starts = choose_starts(cfg, map, kinds, rng);

    std::vector<AgentState> agents;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        AgentState a;
        a.id = static_cast<int>(i);
        a.kind = kinds[i];
        a.pos = starts[i];
        a.margins = kinds[i] == AgentKind::Hunter ? cfg.hunter_margins : cfg.gatherer_margins;
        a.speed = kinds[i] == AgentKind::Hunter ? cfg.hunter_speed : cfg.gatherer_speed;
        agents.push_back(a);
    }

    auto summarize = [&] {
        result.agents.clear();
        result.gamma_t = 0;
        for (const auto& a : agents) {
            AgentSummary s{a.id, a.kind, a.cost, a.tally, agent_effectiveness(a.cost, a.tally),
                           a.cost == 0 && a.tally > 0};
            if (a.kind != AgentKind::Hunter) result.gamma_t += a.tally;
            result.agents.push_back(s);
        }
        result.cost_t = collective_cost(result.agents, cfg.rho_h, cfg.rho_g);
        result.eta_t = mission_effectiveness(result.gamma_t, result.cost_t);
    };

    StepContext ctx{truth, board, rng, result.trace, result.assignments};
    ctx.sensing_radius = cfg.sensing_radius;
    ctx.metric = cfg.metric;
    ctx.perpetual = cfg.perpetual;
    ctx.gatherer_full_observation = cfg.gatherer_full_observation;

    try {
        // Every start must be free and all starts mutually reachable.
        auto labels = free_components(truth);
        for (const auto& a : agents) {
            if (!truth.in_bounds(a.pos) || truth.is_obstacle(a.pos))
                throw MissionError("agent " + std::to_string(a.id) + " starts on a blocked cell " + to_string(a.pos));
            if (labels[truth.index(a.pos)] != labels[truth.index(agents.front().pos)])
                throw MissionError("agent " + std::to_string(a.id) + " start " + to_string(a.pos) +
                                   " is unreachable from agent 0");
        }
        for (const auto& a : agents)
            result.trace.emit(0, a.id, "start", std::string(to_string(a.kind)) + " " + to_string(a.pos));
        for (const auto& [id, p] : truth.tasks())
            result.trace.emit(0, -1, "spawn", "task " + std::to_string(id) + " " + to_string(p));
        while (truth.live_task_count() < cfg.tasks) {
            CellPos p = spawn_task(truth, rng, board);
            result.trace.emit(0, -1, "spawn", "task " + std::to_string(*truth.task_at(p)) + " " + to_string(p));
        }
        for (auto& a : agents) observe(a, ctx);

        for (int tau = 1; tau <= cfg.tau_max; ++tau) {
            ctx.iteration = tau;
            for (auto& a : agents) {
                switch (a.kind) {
                    case AgentKind::Hunter: hunter_step(a, ctx); break;
                    case AgentKind::Gatherer: gatherer_step(a, ctx, cfg.mu); break;
                    case AgentKind::Baseline: baseline_step(a, ctx); break;
                }
            }
            if (cfg.perpetual) {
                if (int reverted = board.decay_knowledge(tau); reverted > 0)
                    result.trace.emit(tau, -1, "decay", std::to_string(reverted));
            }

            IterationStats st;
            st.iteration = tau;
            st.live = truth.live_task_count();
            st.spawned = truth.spawned();
            long long cost_h = 0;
            long long cost_o = 0;
            for (const auto& a : agents) {
                if (a.kind != AgentKind::Hunter) st.gathered += a.tally;
                (a.kind == AgentKind::Hunter ? cost_h : cost_o) += a.cost;
            }
            st.cost_t = cfg.rho_h * static_cast<double>(cost_h) + cfg.rho_g * static_cast<double>(cost_o);
            if (st.spawned - st.gathered != st.live) ++result.conservation_violations;
            if (cfg.perpetual && st.live != cfg.tasks) ++result.conservation_violations;
            result.iterations.push_back(st);
        }
    } catch (const MissionError& e) {
        result.error = e.what();
        result.trace.emit(ctx.iteration, -1, "error", e.what());
    }
    summarize();
    return result;
}

}  // namespace hgsim
