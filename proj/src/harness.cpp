#include "hgsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace hgsim {

std::vector<MissionResult> run_batch(const std::vector<MissionConfig>& configs, int jobs) {
    std::vector<MissionResult> results(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                results[i] = run_mission(configs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(configs.size(), 1)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

RunRow make_row(const std::string& study, const MissionConfig& cfg, const MissionResult& result) {
    RunRow row;
    row.study = study;
    row.map = cfg.map;
    row.seed = cfg.seed;
    row.mu = cfg.mu;
    row.hunter = cfg.hunter_margins;
    row.gatherer = cfg.gatherer_margins;
    row.rho_ratio = cfg.rho_h / cfg.rho_g;
    row.gamma_t = result.gamma_t;
    row.cost_t = result.cost_t;
    row.eta_t = result.eta_t;
    for (const auto& a : result.agents) row.agents.push_back({a.id, a.tally, a.cost});
    return row;
}

namespace {

bool same_point(const RunRow& r, const PointSummary& s) {
    return r.study == s.study && r.map == s.map && r.mu == s.mu && r.hunter.r_c == s.hunter.r_c &&
           r.hunter.r_u == s.hunter.r_u && r.gatherer.r_c == s.gatherer.r_c && r.gatherer.r_u == s.gatherer.r_u &&
           r.rho_ratio == s.rho_ratio;
}

PointSummary point_of(const RunRow& r) {
    PointSummary s;
    s.study = r.study;
    s.map = r.map;
    s.mu = r.mu;
    s.hunter = r.hunter;
    s.gatherer = r.gatherer;
    s.rho_ratio = r.rho_ratio;
    return s;
}

void fill_stats(PointSummary& s, const std::vector<double>& values) {
    s.n = static_cast<int>(values.size());
    s.mean = values.empty() ? 0.0 : stats::mean(values);
    s.sd = values.size() >= 2 ? stats::sample_sd(values) : 0.0;
}

std::string verdict_of(const stats::TestReport& r) { return r.reject() ? "reject H0" : "retain H0"; }

template <typename Fn>
NamedTest guarded_test(std::string name, Fn&& fn) {
    NamedTest t;
    t.name = std::move(name);
    try {
        t.report = fn();
        t.verdict = verdict_of(*t.report);
    } catch (const stats::DegenerateSample&) {
        t.verdict = "DEGENERATE";
    }
    return t;
}

std::vector<double> agent_eta(const std::vector<RunRow>& rows, int agent_id) {
    std::vector<double> out;
    for (const auto& r : rows)
        for (const auto& a : r.agents)
            if (a.id == agent_id) out.push_back(agent_effectiveness(a.cost, a.tally));
    return out;
}

std::vector<double> eta_column(const std::vector<RunRow>& rows) {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.eta_t);
    return out;
}

void tally_health(StudyReport& report, const std::vector<MissionResult>& results) {
    for (const auto& r : results) {
        if (!r.ok()) ++report.mission_errors;
        report.conservation_violations += r.conservation_violations;
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<MissionConfig> seeded(const MissionConfig& base, int runs, std::uint64_t seed_base) {
    std::vector<MissionConfig> out;
    for (int i = 0; i < runs; ++i) {
        MissionConfig c = base;
        c.seed = seed_base + static_cast<std::uint64_t>(i);
        c.trace = false;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<PointSummary> summarize_eta(const std::vector<RunRow>& rows) {
    std::vector<PointSummary> points;
    std::vector<std::vector<double>> values;
    for (const auto& r : rows) {
        auto it = std::find_if(points.begin(), points.end(), [&](const PointSummary& s) { return same_point(r, s); });
        std::size_t idx;
        if (it == points.end()) {
            points.push_back(point_of(r));
            points.back().quantity = "eta_t";
            values.emplace_back();
            idx = points.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - points.begin());
        }
        values[idx].push_back(r.eta_t);
    }
    for (std::size_t i = 0; i < points.size(); ++i) fill_stats(points[i], values[i]);
    return points;
}

std::vector<PointSummary> summarize_agents(const std::vector<RunRow>& rows) {
    std::vector<PointSummary> out;
    if (rows.empty()) return out;
    for (const auto& a : rows.front().agents) {
        PointSummary s = point_of(rows.front());
        s.quantity = "eta_agent" + std::to_string(a.id);
        fill_stats(s, agent_eta(rows, a.id));
        out.push_back(s);
    }
    return out;
}

StudyReport run_fairness(const MissionConfig& config, int runs, std::uint64_t seed_base, int jobs) {
    StudyReport report;
    report.study = "fairness";
    auto configs = seeded(config, runs, seed_base);
    auto results = run_batch(configs, jobs);
    tally_health(report, results);
    for (std::size_t i = 0; i < results.size(); ++i) report.rows.push_back(make_row("fairness", configs[i], results[i]));
    report.summaries = summarize_eta(report.rows);
    auto per_agent = summarize_agents(report.rows);
    report.summaries.insert(report.summaries.end(), per_agent.begin(), per_agent.end());

    std::vector<int> hunters;
    std::vector<int> gatherers;
    for (int id = 0; id < config.n_hunters; ++id) hunters.push_back(id);
    for (int id = 0; id < config.n_gatherers; ++id) gatherers.push_back(config.n_hunters + id);

    auto not_applicable = [](std::string name) { return NamedTest{std::move(name), std::nullopt, "NOT-APPLICABLE"}; };
    auto anova_over = [&](const std::string& name, const std::vector<int>& ids) {
        if (runs < 2 || ids.size() < 2) return not_applicable(name);
        return guarded_test(name, [&] {
            std::vector<std::vector<double>> groups;
            for (int id : ids) groups.push_back(agent_eta(report.rows, id));
            return stats::one_way_anova(groups);
        });
    };
    report.tests.push_back(anova_over("hunters one-way ANOVA", hunters));
    if (gatherers.size() == 2) {
        if (runs < 2) {
            report.tests.push_back(not_applicable("gatherers paired t-test"));
        } else {
            report.tests.push_back(guarded_test("gatherers paired t-test", [&] {
                auto a = agent_eta(report.rows, gatherers[0]);
                auto b = agent_eta(report.rows, gatherers[1]);
                return stats::paired_t_test(a, b, 0.0, stats::Alternative::TwoSided);
            }));
        }
    } else {
        report.notes.push_back("n_g != 2: gatherer fairness tested with one-way ANOVA");
        report.tests.push_back(anova_over("gatherers one-way ANOVA", gatherers));
    }
    return report;
}

StudyReport run_margin_sweep(const SweepSpec& spec, int jobs) {
    StudyReport report;
    report.study = spec.hunters ? "sweep-hunter" : "sweep-gatherer";
    std::vector<MissionConfig> configs;
    for (int rc : spec.rc_grid) {
        for (int ru : spec.ru_grid) {
            if (rc <= 0 || rc >= ru) {
                report.notes.push_back("skipped invalid point rc=" + std::to_string(rc) + " ru=" + std::to_string(ru));
                continue;
            }
            MissionConfig point = spec.base;
            (spec.hunters ? point.hunter_margins : point.gatherer_margins) = Margins{rc, ru};
            auto batch = seeded(point, spec.runs, spec.seed_base);
            configs.insert(configs.end(), batch.begin(), batch.end());
        }
    }
    auto results = run_batch(configs, jobs);
    tally_health(report, results);
    for (std::size_t i = 0; i < results.size(); ++i) report.rows.push_back(make_row(report.study, configs[i], results[i]));
    report.summaries = summarize_eta(report.rows);
    for (const auto& s : report.summaries)
        if (!report.argmax || s.mean > report.argmax->mean) report.argmax = s;
    return report;
}

StudyReport run_coordination_study(const MissionConfig& config, const std::vector<double>& mus, int runs,
                                   const std::vector<std::string>& maps, double d0_fraction,
                                   std::optional<double> test_mu, std::uint64_t seed_base, int jobs) {
    StudyReport report;
    report.study = "coordination";
    std::vector<MissionConfig> configs;
    for (const auto& map : maps) {
        for (double mu : mus) {
            MissionConfig point = config;
            point.map = map;
            point.mu = mu;
            auto batch = seeded(point, runs, seed_base);
            configs.insert(configs.end(), batch.begin(), batch.end());
        }
    }
    auto results = run_batch(configs, jobs);
    tally_health(report, results);
    for (std::size_t i = 0; i < results.size(); ++i) report.rows.push_back(make_row("coordination", configs[i], results[i]));
    report.summaries = summarize_eta(report.rows);

    for (const auto& map : maps) {
        std::optional<PointSummary> best;
        for (const auto& s : report.summaries)
            if (s.map == map && (!best || s.mean > best->mean)) best = s;
        if (!best) continue;
        report.best_points.push_back(*best);
        report.notes.push_back("map " + map + ": best mu = " + fmt(best->mu) + " (mean eta_t " + fmt(best->mean) + ")");

        const std::string name = "map " + map + " paired t-test eta(mu) vs eta(0), one-sided";
        const double mu_hi = test_mu.value_or(best->mu);
        auto column = [&](double mu) {
            std::vector<RunRow> sel;
            for (const auto& r : report.rows)
                if (r.map == map && r.mu == mu) sel.push_back(r);
            return eta_column(sel);
        };
        auto base = column(0.0);
        auto high = column(mu_hi);
        if (runs < 2 || base.empty() || high.empty() || mu_hi == 0.0) {
            report.tests.push_back({name, std::nullopt, "NOT-APPLICABLE"});
            continue;
        }
        const double d0 = d0_fraction * stats::mean(base);
        report.tests.push_back(guarded_test(name + " at mu=" + fmt(mu_hi) + ", D0=" + fmt(d0), [&] {
            return stats::paired_t_test(high, base, d0, stats::Alternative::Greater);
        }));
        const double m0 = stats::mean(base);
        if (m0 > 0.0)
            report.notes.push_back("map " + map + ": improvement mu=0 -> mu=" + fmt(mu_hi) + " is " +
                                   fmt(100.0 * (stats::mean(high) - m0) / m0) + "%");
    }
    return report;
}

std::optional<double> estimate_crossover(const std::vector<double>& ratios, const std::vector<double>& hg_eta,
                                         const std::vector<double>& baseline_eta) {
    const std::size_t n = std::min({ratios.size(), hg_eta.size(), baseline_eta.size()});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d0 = hg_eta[i] - baseline_eta[i];
        const double d1 = hg_eta[i + 1] - baseline_eta[i + 1];
        if (d0 > 0.0 && d1 <= 0.0) {
            const double t = d0 / (d0 - d1);
            return ratios[i] + t * (ratios[i + 1] - ratios[i]);
        }
    }
    return std::nullopt;
}

StudyReport run_baseline_comparison(const MissionConfig& config, const std::vector<double>& ratios, int runs,
                                    std::uint64_t seed_base, int jobs) {
    StudyReport report;
    report.study = "compare";

    MissionConfig hg = config;
    hg.n_baseline = 0;
    MissionConfig base = config;
    base.n_baseline = config.n_baseline > 0 ? config.n_baseline : config.n_hunters + config.n_gatherers;
    base.n_hunters = 0;
    base.n_gatherers = 0;
    base.mu = 0.0;

    // Cost weights only enter at aggregation, so each seed is simulated once
    // and re-weighted for every ratio.
    auto hg_configs = seeded(hg, runs, seed_base);
    auto base_configs = seeded(base, runs, seed_base);
    std::vector<MissionConfig> all = hg_configs;
    all.insert(all.end(), base_configs.begin(), base_configs.end());
    auto results = run_batch(all, jobs);
    tally_health(report, results);

    std::vector<double> hg_curve;
    std::vector<double> base_curve;
    for (double ratio : ratios) {
        for (int variant = 0; variant < 2; ++variant) {
            const auto& cfgs = variant == 0 ? hg_configs : base_configs;
            std::vector<double> etas;
            for (int i = 0; i < runs; ++i) {
                MissionConfig c = cfgs[i];
                c.rho_h = ratio * c.rho_g;
                MissionResult r = results[static_cast<std::size_t>(variant * runs + i)];
                r.cost_t = collective_cost(r, c.rho_h, c.rho_g);
                r.eta_t = mission_effectiveness(r.gamma_t, r.cost_t);
                report.rows.push_back(make_row(variant == 0 ? "compare-hg" : "compare-baseline", c, r));
                etas.push_back(r.eta_t);
            }
            (variant == 0 ? hg_curve : base_curve).push_back(etas.empty() ? 0.0 : stats::mean(etas));
        }
    }
    report.summaries = summarize_eta(report.rows);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        report.notes.push_back("rho_h/rho_g=" + fmt(ratios[i]) + ": hunter-gatherer " + fmt(hg_curve[i]) +
                               " vs baseline " + fmt(base_curve[i]) + " -> " +
                               (hg_curve[i] > base_curve[i] ? "hunter-gatherer" : "baseline"));
    }
    report.crossover = estimate_crossover(ratios, hg_curve, base_curve);
    report.notes.push_back(report.crossover ? "crossover rho_h/rho_g ~ " + fmt(*report.crossover)
                                            : std::string("no crossover inside the ratio grid"));
    return report;
}

std::string raw_csv(const std::vector<RunRow>& rows) {
    std::size_t max_agents = 0;
    for (const auto& r : rows) max_agents = std::max(max_agents, r.agents.size());
    std::string out = "study,map,seed,mu,rc_h,ru_h,rc_g,ru_g,rho_ratio,gamma_t,cost_t,eta_t";
    for (std::size_t i = 0; i < max_agents; ++i) {
        const std::string a = "agent" + std::to_string(i);
        out += "," + a + "_id," + a + "_tally," + a + "_cost";
    }
    out += '\n';
    for (const auto& r : rows) {
        out += r.study + "," + r.map + "," + std::to_string(r.seed) + "," + fmt(r.mu) + "," +
               std::to_string(r.hunter.r_c) + "," + std::to_string(r.hunter.r_u) + "," +
               std::to_string(r.gatherer.r_c) + "," + std::to_string(r.gatherer.r_u) + "," + fmt(r.rho_ratio) + "," +
               std::to_string(r.gamma_t) + "," + fmt(r.cost_t) + "," + fmt(r.eta_t);
        for (std::size_t i = 0; i < max_agents; ++i) {
            if (i < r.agents.size()) {
                const auto& a = r.agents[i];
                out += "," + std::to_string(a.id) + "," + std::to_string(a.tally) + "," + std::to_string(a.cost);
            } else {
                out += ",,,";
            }
        }
        out += '\n';
    }
    return out;
}

std::vector<RunRow> parse_raw_csv(const std::string& text) {
    std::vector<RunRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() < 12) throw std::runtime_error("raw csv: short row");
        RunRow r;
        r.study = f[0];
        r.map = f[1];
        r.seed = std::stoull(f[2]);
        r.mu = std::stod(f[3]);
        r.hunter = {std::stoi(f[4]), std::stoi(f[5])};
        r.gatherer = {std::stoi(f[6]), std::stoi(f[7])};
        r.rho_ratio = std::stod(f[8]);
        r.gamma_t = std::stoi(f[9]);
        r.cost_t = std::stod(f[10]);
        r.eta_t = std::stod(f[11]);
        for (std::size_t i = 12; i + 2 < f.size(); i += 3) {
            if (f[i].empty()) continue;
            r.agents.push_back({std::stoi(f[i]), std::stoi(f[i + 1]), std::stoll(f[i + 2])});
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string summary_csv(const std::vector<PointSummary>& summaries) {
    std::string out = "study,map,mu,rc_h,ru_h,rc_g,ru_g,rho_ratio,quantity,mean,sd,n\n";
    for (const auto& s : summaries) {
        out += s.study + "," + s.map + "," + fmt(s.mu) + "," + std::to_string(s.hunter.r_c) + "," +
               std::to_string(s.hunter.r_u) + "," + std::to_string(s.gatherer.r_c) + "," +
               std::to_string(s.gatherer.r_u) + "," + fmt(s.rho_ratio) + "," + s.quantity + "," + fmt(s.mean) + "," +
               fmt(s.sd) + "," + std::to_string(s.n) + "\n";
    }
    return out;
}

std::string report_text(const StudyReport& report) {
    std::ostringstream os;
    os << "study: " << report.study << "\n";
    std::size_t missions = report.rows.size();
    os << "rows: " << missions << "\n";
    os << "mission errors: " << report.mission_errors << "\n";
    os << "conservation violations: " << report.conservation_violations << "\n";
    for (const auto& s : report.summaries) {
        os << "  " << s.study << " map=" << s.map << " mu=" << fmt(s.mu) << " rc_h=" << s.hunter.r_c
           << " ru_h=" << s.hunter.r_u << " rc_g=" << s.gatherer.r_c << " ru_g=" << s.gatherer.r_u
           << " rho=" << fmt(s.rho_ratio) << " " << s.quantity << ": mean=" << fmt(s.mean) << " sd=" << fmt(s.sd)
           << " n=" << s.n << "\n";
    }
    if (report.argmax) {
        os << "argmax: rc_h=" << report.argmax->hunter.r_c << " ru_h=" << report.argmax->hunter.r_u
           << " rc_g=" << report.argmax->gatherer.r_c << " ru_g=" << report.argmax->gatherer.r_u
           << " mean eta_t=" << fmt(report.argmax->mean) << "\n";
    }
    for (const auto& t : report.tests) {
        os << "test: " << t.name << ": ";
        if (t.report) {
            os << "statistic=" << fmt(t.report->statistic) << " dof=" << fmt(t.report->dof1);
            if (t.report->dof2 > 0) os << "," << fmt(t.report->dof2);
            os << " p=" << fmt(t.report->p_value) << " alternative=" << stats::to_string(t.report->alternative)
               << " alpha=" << fmt(t.report->alpha) << " -> ";
        }
        os << t.verdict << "\n";
    }
    for (const auto& n : report.notes) os << "note: " << n << "\n";
    return os.str();
}

void write_study(const StudyReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        out << content;
    };
    write("raw.csv", raw_csv(report.rows));
    write("summary.csv", summary_csv(report.summaries));
    write("report.txt", report_text(report));
}

}  // namespace hgsim
