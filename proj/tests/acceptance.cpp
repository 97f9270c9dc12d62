// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hgsim/harness.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>

using namespace hgsim;

namespace {

// Pinned tolerances.
constexpr double kAlpha = 0.05;
constexpr int kFairnessRuns = 50;
constexpr int kSweepRuns = 30;
constexpr double kSweepMargin = 0.10;
constexpr int kCoordinationRuns = 50;
constexpr double kCoordinationMu = 0.4;
constexpr int kCompareRuns = 30;
constexpr double kCrossoverLo = 0.25;
constexpr double kCrossoverHi = 0.65;
constexpr int kOracleBoards = 500;
constexpr double kQuadratureTol = 1e-6;
constexpr double kT199 = 0.017, kT199Tol = 0.002;
constexpr double kFcrit = 2.62, kFcritTol = 0.02;

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Tally {
    int failures = 0;
    int violations = 0;
    int mission_errors = 0;
    int perpetual_runs = 0;

    void absorb(const StudyReport& r) {
        violations += r.conservation_violations;
        mission_errors += r.mission_errors;
        perpetual_runs += static_cast<int>(r.rows.size());
    }
    void verdict(int n, const char* name, bool pass, const std::string& detail) {
        if (!pass) ++failures;
        std::printf("criterion %d %s: %s (%s)\n", n, name, pass ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const NamedTest* test_named(const StudyReport& r, const std::string& prefix) {
    for (const auto& t : r.tests)
        if (t.name.rfind(prefix, 0) == 0) return &t;
    return nullptr;
}

void fairness(Tally& t) {
    StudyReport r = run_fairness(desk_config(), kFairnessRuns, 1, jobs());
    t.absorb(r);
    const NamedTest* h = r.tests.size() > 0 ? &r.tests[0] : nullptr;
    const NamedTest* g = r.tests.size() > 1 ? &r.tests[1] : nullptr;
    const bool ok = h && g && h->report && g->report && !h->report->reject() && !g->report->reject();
    t.verdict(1, "fairness", ok,
              ok || (h && h->report && g && g->report)
                  ? fmt("hunter ANOVA F=%.3f p=%.3f; gatherer paired t=%.3f p=%.3f", h->report->statistic,
                        h->report->p_value, g->report->statistic, g->report->p_value)
                  : std::string("tests not applicable"));
}

void margin_sweep(Tally& t) {
    SweepSpec spec;
    spec.base = desk_config();
    spec.hunters = true;
    spec.rc_grid = {1, 3, 5, 7, 10, 16, 28};
    // Hunter UPM radii at or below r_s + 1 are left out: every frontier then
    // sits outside the UPM and hunters idle while gatherers harvest the tasks
    // spawned next to them, which measures the respawn rule rather than margins.
    spec.ru_grid = {8, 12, 16, 20, 30, 45, 70};
    spec.runs = kSweepRuns;
    StudyReport r = run_margin_sweep(spec, jobs());
    t.absorb(r);
    auto at = [&](int rc, int ru) -> const PointSummary* {
        for (const auto& s : r.summaries)
            if (s.hunter.r_c == rc && s.hunter.r_u == ru) return &s;
        return nullptr;
    };
    const PointSummary* small = at(spec.rc_grid.front(), spec.ru_grid.front());
    const PointSummary* large = at(spec.rc_grid.back(), spec.ru_grid.back());
    if (!r.argmax || !small || !large) {
        t.verdict(2, "margin-sweep", false, "missing grid points");
        return;
    }
    const auto& best = *r.argmax;
    const bool interior = best.hunter.r_u != spec.ru_grid.front() && best.hunter.r_u != spec.ru_grid.back();
    const bool above_small = best.mean >= (1 + kSweepMargin) * small->mean;
    const bool above_large = best.mean >= (1 + kSweepMargin) * large->mean;
    t.verdict(2, "margin-sweep", interior && above_small && above_large,
              fmt("argmax rc=%.0f ru=%.0f eta=%.5f", best.hunter.r_c, best.hunter.r_u, best.mean) +
                  fmt("; small corner %.5f (+%.1f%%), large corner %.5f (+%.1f%%)", small->mean,
                      100 * (best.mean / small->mean - 1), large->mean, 100 * (best.mean / large->mean - 1)));
}

void coordination(Tally& t) {
    const std::vector<double> mus{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    StudyReport r = run_coordination_study(desk_config(), mus, kCoordinationRuns, {"simple50", "confined50"}, 0.0,
                                           kCoordinationMu, 1, jobs());
    t.absorb(r);
    auto mean_at = [&](const std::string& map, double mu) {
        for (const auto& s : r.summaries)
            if (s.map == map && std::abs(s.mu - mu) < 1e-12) return s.mean;
        return std::nan("");
    };
    auto best_mu = [&](const std::string& map) {
        for (const auto& p : r.best_points)
            if (p.map == map) return p.mu;
        return std::nan("");
    };
    const NamedTest* test = test_named(r, "map simple50 ");
    const double base = mean_at("simple50", 0.0);
    const double high = mean_at("simple50", kCoordinationMu);
    const double p = test && test->report ? test->report->p_value : 1.0;
    const bool improved = high > base && p < kAlpha;
    const bool ordered = best_mu("confined50") >= best_mu("simple50");
    t.verdict(3, "coordination", improved && ordered,
              fmt("simple50 eta mu=0 %.5f, mu=0.4 %.5f (%+.1f%%), one-sided p=%.3f", base, high,
                  100 * (high / base - 1), p) +
                  fmt("; optimal mu simple50 %.1f, confined50 %.1f", best_mu("simple50"), best_mu("confined50")));
}

void crossover(Tally& t) {
    std::vector<double> ratios;
    for (int i = 1; i <= 10; ++i) ratios.push_back(i / 10.0);
    StudyReport r = run_baseline_comparison(desk_config(), ratios, kCompareRuns, 1, jobs());
    t.absorb(r);
    auto mean_of = [&](const std::string& study, double ratio) {
        for (const auto& s : r.summaries)
            if (s.study == study && std::abs(s.rho_ratio - ratio) < 1e-12) return s.mean;
        return std::nan("");
    };
    const double hg02 = mean_of("compare-hg", 0.2), bl02 = mean_of("compare-baseline", 0.2);
    const double hg10 = mean_of("compare-hg", 1.0), bl10 = mean_of("compare-baseline", 1.0);
    const double x = r.crossover.value_or(std::nan(""));
    const bool ok = hg02 > bl02 && bl10 > hg10 && x >= kCrossoverLo && x <= kCrossoverHi;
    t.verdict(4, "baseline-crossover", ok,
              fmt("ratio 0.2: hg %.5f vs baseline %.5f; ratio 1.0: hg %.5f vs baseline %.5f", hg02, bl02, hg10, bl10) +
                  fmt("; crossover %.3f", x));
}

void eg_oracle(Tally& t) {
    Rng rng(5005);
    int mismatches = 0, picks = 0;
    for (int i = 0; i < kOracleBoards; ++i) {
        auto c = oracle::random_eg_case(rng);
        auto wf = oracle::brute_force_choice(c.board, 0, c.agent.pos, c.agent.margins, JobKind::Frontier, 0.0);
        auto wt = oracle::brute_force_choice(c.board, 0, c.agent.pos, c.agent.margins, JobKind::Task, c.mu);
        mismatches += !oracle::same_choice(choose_frontier(c.agent, c.board), wf);
        mismatches += !oracle::same_choice(choose_task(c.agent, c.board, c.mu), wt);
        picks += wf.has_value() + wt.has_value();
    }
    t.verdict(5, "eg-oracle", mismatches == 0,
              fmt("%.0f boards, %.0f selections compared, %.0f mismatches", kOracleBoards, 2.0 * kOracleBoards,
                  mismatches) + fmt(", %.0f non-empty", picks));
}

void path_oracle(Tally& t) {
    Rng rng(6006);
    long long pairs = 0, mismatches = 0;
    for (int i = 0; i < kOracleBoards; ++i) {
        OnlineBoard b = oracle::random_board(rng, 30, 30, 25);
        CellPos src;
        do {
            src = oracle::random_cell(rng, 30, 30);
        } while (!b.traversable(src));
        const auto dist = oracle::bfs(b, src);
        for (int k = 0; k < 900; ++k) {
            const CellPos dst = b.pos_of(k);
            if (!b.traversable(dst)) continue;
            auto got = travel_distance(b, src, dst);
            const int want = dist[k];
            ++pairs;
            if (want < 0 ? got.has_value() : (!got || *got != want)) ++mismatches;
        }
    }
    t.verdict(6, "path-oracle", mismatches == 0,
              fmt("%.0f boards, %.0f pairs, %.0f mismatches", kOracleBoards, static_cast<double>(pairs),
                  static_cast<double>(mismatches)));
}

void stats_oracle(Tally& t) {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double dof = 2 + std::floor(u(rng) * 198);
        const double tt = -4 + 8 * u(rng);
        worst = std::max(worst, std::abs(stats::student_t_sf(tt, dof) - oracle::t_sf(tt, dof)));
        const double d1 = 1 + std::floor(u(rng) * 9);
        const double d2 = 2 + std::floor(u(rng) * 398);
        const double f = 0.05 + 6 * u(rng);
        worst = std::max(worst, std::abs(stats::f_sf(f, d1, d2) - oracle::f_sf(f, d1, d2)));
    }
    const double p199 = stats::student_t_sf(2.12, 199);
    const double fcrit = stats::f_quantile(1 - kAlpha, 3, 396);
    const bool ok = worst <= kQuadratureTol && std::abs(p199 - kT199) <= kT199Tol && std::abs(fcrit - kFcrit) <= kFcritTol;
    t.verdict(7, "stats-oracle", ok,
              fmt("max |p - quadrature| = %.2e; P(T199 > 2.12) = %.4f; F_crit(3,396) = %.4f", worst, p199, fcrit));
}

void determinism(Tally& t) {
    MissionConfig cfg = desk_config();
    cfg.seed = 7;
    MissionResult a = run_mission(cfg);
    MissionResult b = run_mission(cfg);
    const bool same_run = a.trace.render() == b.trace.render() &&
                          raw_csv({make_row("run", cfg, a)}) == raw_csv({make_row("run", cfg, b)});

    std::vector<MissionConfig> cfgs;
    for (int i = 0; i < 16; ++i) {
        MissionConfig c = desk_config();
        c.seed = 1 + i;
        cfgs.push_back(c);
    }
    auto one = run_batch(cfgs, 1);
    auto eight = run_batch(cfgs, 8);
    bool same_batch = one.size() == eight.size();
    std::vector<RunRow> rows1, rows8;
    for (std::size_t i = 0; same_batch && i < one.size(); ++i) {
        same_batch = one[i].trace.render() == eight[i].trace.render();
        rows1.push_back(make_row("det", cfgs[i], one[i]));
        rows8.push_back(make_row("det", cfgs[i], eight[i]));
    }
    same_batch = same_batch && raw_csv(rows1) == raw_csv(rows8);
    for (const auto* set : {&one, &eight})
        for (const auto& r : *set) {
            t.violations += r.conservation_violations;
            t.mission_errors += !r.ok();
            ++t.perpetual_runs;
        }
    t.violations += a.conservation_violations + b.conservation_violations;
    t.perpetual_runs += 2;
    t.verdict(8, "determinism", same_run && same_batch,
              std::string("repeat run ") + (same_run ? "identical" : "DIFFERS") + "; jobs 1 vs 8 over 16 seeds " +
                  (same_batch ? "identical" : "DIFFERS"));
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    fairness(t);
    margin_sweep(t);
    coordination(t);
    crossover(t);
    eg_oracle(t);
    path_oracle(t);
    stats_oracle(t);
    determinism(t);
    t.verdict(9, "conservation", t.violations == 0 && t.mission_errors == 0,
              fmt("%.0f perpetual runs, %.0f violating iterations, %.0f mission errors", t.perpetual_runs,
                  t.violations, t.mission_errors));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("acceptance: %d of 9 criteria failed (%.0f s)\n", t.failures, secs);
    return t.failures == 0 ? 0 : 1;
}
