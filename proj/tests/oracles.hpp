// Independent reference implementations used by the unit and acceptance tests.
#pragma once

#include "hgsim/agents.hpp"
#include "hgsim/board.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

using namespace hgsim;

inline CellPos random_cell(Rng& rng, int w, int h) {
    return {static_cast<int>(uniform_index(rng, w)), static_cast<int>(uniform_index(rng, h))};
}

// Known obstacles with probability obstacle_pct, known free with free_pct,
// unknown otherwise.
inline OnlineBoard random_board(Rng& rng, int w, int h, int obstacle_pct, int free_pct = 30) {
    OnlineBoard b(w, h);
    std::vector<Observation> obs;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto roll = static_cast<int>(uniform_index(rng, 100));
            if (roll < obstacle_pct) obs.push_back({{x, y}, CellKind::Obstacle, -1});
            else if (roll < obstacle_pct + free_pct) obs.push_back({{x, y}, CellKind::Free, -1});
        }
    b.ingest_observations(obs, 1);
    return b;
}

// Plain breadth-first search over cells that are not known obstacles; -1 marks unreachable.
inline std::vector<int> bfs(const OnlineBoard& b, CellPos src) {
    std::vector<int> dist(static_cast<std::size_t>(b.width()) * b.height(), -1);
    if (!b.traversable(src)) return dist;
    std::deque<CellPos> q{src};
    dist[b.index(src)] = 0;
    while (!q.empty()) {
        CellPos p = q.front();
        q.pop_front();
        const CellPos nbr[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (CellPos n : nbr) {
            if (!b.in_bounds(n) || !b.traversable(n) || dist[b.index(n)] >= 0) continue;
            dist[b.index(n)] = dist[b.index(p)] + 1;
            q.push_back(n);
        }
    }
    return dist;
}

struct Choice {
    JobKey key;
    CellPos pos;
    MarginBand band = MarginBand::None;
    int distance = 0;
    double value = 0.0;
};

inline bool may_select(const JobRecord& job, int agent, MarginBand band) {
    if (job.status == JobStatus::Available) return true;
    if (job.status == JobStatus::Pending) return job.holder == agent || band == MarginBand::Cpm;
    return job.holder == agent;
}

inline JobKey key_of(const JobRecord& job, const OnlineBoard& b) {
    return job.kind == JobKind::Frontier ? JobKey{JobKind::Frontier, b.index(job.pos)}
                                         : JobKey{JobKind::Task, job.task_id};
}

// Scores every job of `kind` from raw board state and returns the argmax,
// following the CPM-before-UPM rule. Frontier scores ignore mu.
inline std::optional<Choice> brute_force_choice(const OnlineBoard& b, int agent, CellPos pos, Margins m,
                                                JobKind kind, double mu) {
    const auto& jobs = kind == JobKind::Frontier ? b.frontier_jobs() : b.task_jobs();
    const auto from_agent = bfs(b, pos);
    std::vector<Choice> cpm, upm;
    for (const auto& [id, job] : jobs) {
        const int d = from_agent[b.index(job.pos)];
        if (d <= 0 || d >= m.r_u) continue;
        const MarginBand band = d < m.r_c ? MarginBand::Cpm : MarginBand::Upm;
        if (!may_select(job, agent, band)) continue;

        const auto from_job = bfs(b, job.pos);
        double hood = 0.0, cf = 0.0, cf_uf = 0.0;
        for (const auto& [id2, other] : jobs) {
            const int dd = from_job[b.index(other.pos)];
            if (dd < 0 || dd >= m.r_c) continue;
            hood += 1.0;
            cf += static_cast<double>(other.cpm_members.size());
            cf_uf += static_cast<double>(other.cpm_members.size() + other.upm_members.size());
        }
        double value = hood / (d * (band == MarginBand::Cpm ? cf : cf_uf));
        if (kind == JobKind::Task) {
            int lambda = 0;
            for (const auto& [fid, f] : b.frontier_jobs()) {
                const int df = from_job[b.index(f.pos)];
                if (df >= 0 && df < m.r_c) ++lambda;
            }
            value *= 1.0 + mu * lambda;
        }
        (band == MarginBand::Cpm ? cpm : upm).push_back({key_of(job, b), job.pos, band, d, value});
    }
    const auto& pool = cpm.empty() ? upm : cpm;
    std::optional<Choice> best;
    for (const Choice& c : pool) {
        if (!best || c.value > best->value ||
            (c.value == best->value &&
             (c.distance < best->distance || (c.distance == best->distance && c.pos < best->pos))))
            best = c;
    }
    return best;
}

struct EgCase {
    OnlineBoard board{1, 1};
    AgentState agent;
    double mu = 0.0;
};

// A random 20x20 board with frontiers, detected tasks, memberships of the
// evaluating agent (id 0) and three others, and a few standing claims.
inline EgCase random_eg_case(Rng& rng) {
    EgCase c;
    const int n = 20;
    c.board = OnlineBoard(n, n);
    std::vector<Observation> obs;
    int next_task = 0;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            auto roll = uniform_index(rng, 100);
            if (roll < 12) obs.push_back({{x, y}, CellKind::Obstacle, -1});
            else if (roll < 17) obs.push_back({{x, y}, CellKind::Task, next_task++});
            else if (roll < 55) obs.push_back({{x, y}, CellKind::Free, -1});
        }
    c.board.ingest_observations(obs, 1);

    do {
        c.agent.pos = random_cell(rng, n, n);
    } while (!c.board.traversable(c.agent.pos));
    c.agent.id = 0;
    c.agent.margins.r_c = 2 + static_cast<int>(uniform_index(rng, 8));
    c.agent.margins.r_u = c.agent.margins.r_c + 1 + static_cast<int>(uniform_index(rng, 16));
    c.mu = static_cast<double>(uniform_index(rng, 11)) / 10.0;

    for (JobKind kind : {JobKind::Frontier, JobKind::Task}) {
        const auto& jobs = kind == JobKind::Frontier ? c.board.frontier_jobs() : c.board.task_jobs();
        std::vector<JobKey> keys;
        for (const auto& [id, job] : jobs) keys.push_back(key_of(job, c.board));

        // The evaluating agent's own labels come from the oracle's BFS.
        const auto dist = bfs(c.board, c.agent.pos);
        std::vector<MembershipLabel> own;
        for (const auto& [id, job] : jobs) {
            const int d = dist[c.board.index(job.pos)];
            if (d < 0 || d >= c.agent.margins.r_u) continue;
            own.push_back({key_of(job, c.board), d < c.agent.margins.r_c ? MarginBand::Cpm : MarginBand::Upm});
        }
        c.board.update_margin_membership(0, kind, own);

        for (int other = 1; other <= 3; ++other) {
            std::vector<MembershipLabel> labels;
            for (JobKey k : keys) {
                auto roll = uniform_index(rng, 4);
                if (roll == 0) labels.push_back({k, MarginBand::Cpm});
                else if (roll == 1) labels.push_back({k, MarginBand::Upm});
            }
            c.board.update_margin_membership(other, kind, labels);
        }
        for (JobKey k : keys) {
            if (uniform_index(rng, 6) != 0) continue;
            const int who = static_cast<int>(uniform_index(rng, 4));
            c.board.try_claim(who, k, uniform_index(rng, 2) ? MarginBand::Cpm : MarginBand::Upm);
        }
    }
    return c;
}

// Compares one library selection against the oracle.
inline bool same_choice(const std::optional<Selection>& got, const std::optional<Choice>& want) {
    if (!got || !want) return !got && !want;
    return got->key == want->key && got->band == want->band && got->distance == want->distance &&
           std::abs(got->value - want->value) <= 1e-12 * std::max(1.0, std::abs(want->value));
}

// Composite Simpson rule with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// P(T > t) for Student's t by integrating the density.
inline double t_sf(double t, double dof) {
    const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) / std::sqrt(dof * M_PI);
    auto pdf = [&](double x) { return c * std::pow(1 + x * x / dof, -(dof + 1) / 2); };
    const double mid = simpson(pdf, 0.0, std::abs(t));
    return t >= 0 ? 0.5 - mid : 0.5 + mid;
}

// P(F > f) by integrating the density after substituting x = u^2, which
// removes the singularity at zero when dof1 < 2.
inline double f_sf(double f, double d1, double d2) {
    const double logc = std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2) +
                        (d1 / 2) * std::log(d1 / d2);
    auto g = [&](double u) {
        if (u == 0.0) return d1 == 1.0 ? 2.0 * std::exp(logc) : 0.0;
        const double x = u * u;
        return 2.0 * u *
               std::exp(logc + (d1 / 2 - 1) * std::log(x) - ((d1 + d2) / 2) * std::log1p(d1 * x / d2));
    };
    return 1.0 - simpson(g, 0.0, std::sqrt(f));
}

}  // namespace oracle
