// hgsim: single missions and batch studies from the command line.

#include "hgsim/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hgsim;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kMission = 3 };

struct Common {
    std::string config = "default";
    std::vector<std::string> sets;
    std::string out = "hgsim-out";
    int jobs = 1;
    std::uint64_t seed_base = 1;
    int runs = 30;
};

void add_common(CLI::App* cmd, Common& c, bool batch) {
    cmd->add_option("--config", c.config, "preset (default, desk) or config file")->capture_default_str();
    cmd->add_option("--set", c.sets, "override a config key, key=value (repeatable)");
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    if (batch) {
        cmd->add_option("--jobs", c.jobs, "concurrent missions")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--seed-base", c.seed_base, "seed of the first run")->capture_default_str();
        cmd->add_option("--runs", c.runs, "missions per point")->check(CLI::PositiveNumber)->capture_default_str();
    }
}

MissionConfig build_config(const Common& c) {
    MissionConfig cfg = load_config(c.config);
    for (const auto& s : c.sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    validate(cfg);
    // Surfaces a missing map before any mission starts.
    resolve_map_path(cfg.map);
    return cfg;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::istringstream is(item);
        T v;
        if (!(is >> v) || !is.eof()) throw CLI::ValidationError("list", "bad list item '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("list", "empty list");
    return out;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int finish(const StudyReport& report, const MissionConfig& cfg, const Common& c) {
    write_study(report, c.out);
    write_file(fs::path(c.out) / "config.snapshot", config_snapshot(cfg));
    std::cout << report_text(report);
    if (report.mission_errors > 0) {
        std::cerr << "error: " << report.mission_errors << " mission(s) failed\n";
        return kMission;
    }
    return kOk;
}

int cmd_run(const Common& c) {
    MissionConfig cfg = build_config(c);
    MissionResult r = run_mission(cfg);
    StudyReport report;
    report.study = "run";
    report.rows.push_back(make_row("run", cfg, r));
    report.summaries = summarize_eta(report.rows);
    if (!r.ok()) report.mission_errors = 1;
    report.conservation_violations = r.conservation_violations;
    write_study(report, c.out);
    write_file(fs::path(c.out) / "config.snapshot", config_snapshot(cfg));
    write_file(fs::path(c.out) / "traces" / ("seed-" + std::to_string(cfg.seed) + ".tsv"), r.trace.render());
    if (!r.ok()) {
        std::cerr << "mission error: " << *r.error << "\n";
        return kMission;
    }
    std::printf("eta_t=%.10g gamma_t=%d cost_t=%.10g\n", r.eta_t, r.gamma_t, r.cost_t);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hunter-gatherer multi-agent task allocation simulator"};
    app.require_subcommand(1);

    Common run_opts;
    auto* run = app.add_subcommand("run", "run one mission");
    add_common(run, run_opts, false);

    Common fair_opts;
    auto* fairness = app.add_subcommand("fairness", "per-agent effectiveness fairness study");
    add_common(fairness, fair_opts, true);

    Common sweep_opts;
    std::string param = "hunter";
    std::string grid = "coarse";
    std::string rc_list;
    std::string ru_list;
    auto* sweep = app.add_subcommand("sweep", "profit margin sweep");
    add_common(sweep, sweep_opts, true);
    sweep->add_option("--param", param, "hunter or gatherer")
        ->check(CLI::IsMember({"hunter", "gatherer"}))
        ->capture_default_str();
    sweep->add_option("--grid", grid, "coarse, or use --rc/--ru")->capture_default_str();
    sweep->add_option("--rc", rc_list, "comma-separated r_c values");
    sweep->add_option("--ru", ru_list, "comma-separated r_u values");

    Common coord_opts;
    std::string mus = "0,0.2,0.4,0.6,0.8,1";
    std::string maps;
    double d0_fraction = 0.15;
    auto* coord = app.add_subcommand("coordination", "coordination coefficient study");
    add_common(coord, coord_opts, true);
    coord->add_option("--mus", mus, "comma-separated mu values")->capture_default_str();
    coord->add_option("--maps", maps, "comma-separated maps (default: the config map)");
    coord->add_option("--d0", d0_fraction, "D0 as a fraction of mean eta at mu=0")->capture_default_str();

    Common cmp_opts;
    std::string ratios = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    auto* compare = app.add_subcommand("compare", "hunter-gatherer versus single-type baseline");
    add_common(compare, cmp_opts, true);
    compare->add_option("--ratios", ratios, "comma-separated rho_h/rho_g values")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*fairness) {
            MissionConfig cfg = build_config(fair_opts);
            return finish(run_fairness(cfg, fair_opts.runs, fair_opts.seed_base, fair_opts.jobs), cfg, fair_opts);
        }
        if (*sweep) {
            SweepSpec spec;
            spec.base = build_config(sweep_opts);
            spec.hunters = param == "hunter";
            if (!rc_list.empty() || !ru_list.empty()) {
                if (rc_list.empty() || ru_list.empty()) throw CLI::ValidationError("sweep", "--rc and --ru go together");
                spec.rc_grid = parse_list<int>(rc_list);
                spec.ru_grid = parse_list<int>(ru_list);
            } else if (grid == "coarse") {
                const int side = std::max(spec.base.hunter_margins.r_u, spec.base.gatherer_margins.r_u);
                for (int i = 1; i <= 7; ++i) spec.rc_grid.push_back(std::max(1, side * i / 8));
                for (int i = 1; i <= 7; ++i) spec.ru_grid.push_back(side * (i + 1) / 4);
            } else {
                throw CLI::ValidationError("sweep", "unknown grid '" + grid + "'");
            }
            spec.runs = sweep_opts.runs;
            spec.seed_base = sweep_opts.seed_base;
            return finish(run_margin_sweep(spec, sweep_opts.jobs), spec.base, sweep_opts);
        }
        if (*coord) {
            MissionConfig cfg = build_config(coord_opts);
            auto map_list = maps.empty() ? std::vector<std::string>{cfg.map} : split_names(maps);
            for (const auto& m : map_list)
                if (m.rfind("open:", 0) != 0) resolve_map_path(m);
            return finish(run_coordination_study(cfg, parse_list<double>(mus), coord_opts.runs, map_list, d0_fraction,
                                                 std::nullopt, coord_opts.seed_base, coord_opts.jobs),
                          cfg, coord_opts);
        }
        if (*compare) {
            MissionConfig cfg = build_config(cmp_opts);
            return finish(run_baseline_comparison(cfg, parse_list<double>(ratios), cmp_opts.runs, cmp_opts.seed_base,
                                                  cmp_opts.jobs),
                          cfg, cmp_opts);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const MissionError& e) {
        std::cerr << "mission error: " << e.what() << "\n";
        return kMission;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMission;
    }
    return kUsage;
}
