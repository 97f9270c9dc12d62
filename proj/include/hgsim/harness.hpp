#pragma once

#include "hgsim/mission.hpp"
#include "hgsim/stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hgsim {

struct AgentCell {
    int id = 0;
    int tally = 0;
    long long cost = 0;
};

// One raw CSV row: a single mission (or one cost re-weighting of it).
struct RunRow {
    std::string study;
    std::string map;
    std::uint64_t seed = 0;
    double mu = 0.0;
    Margins hunter;
    Margins gatherer;
    double rho_ratio = 0.0;
    int gamma_t = 0;
    double cost_t = 0.0;
    double eta_t = 0.0;
    std::vector<AgentCell> agents;
};

struct PointSummary {
    std::string study;
    std::string map;
    double mu = 0.0;
    Margins hunter;
    Margins gatherer;
    double rho_ratio = 0.0;
    std::string quantity;  // "eta_t" or "eta_agent<id>"
    double mean = 0.0;
    double sd = 0.0;
    int n = 0;
};

struct NamedTest {
    std::string name;
    std::optional<stats::TestReport> report;
    std::string verdict;  // "retain H0", "reject H0", "NOT-APPLICABLE", "DEGENERATE"
};

struct StudyReport {
    std::string study;
    std::vector<RunRow> rows;
    std::vector<PointSummary> summaries;
    std::vector<NamedTest> tests;
    std::vector<std::string> notes;
    std::optional<PointSummary> argmax;
    std::vector<PointSummary> best_points;  // per-map optimum (coordination study)
    std::optional<double> crossover;        // baseline comparison
    int mission_errors = 0;
    int conservation_violations = 0;
};

struct SweepSpec {
    MissionConfig base;
    bool hunters = true;  // sweep hunter margins (else gatherer margins)
    std::vector<int> rc_grid;
    std::vector<int> ru_grid;
    int runs = 1;
    std::uint64_t seed_base = 1;
};

// Runs missions concurrently on up to `jobs` threads; output order follows input.
std::vector<MissionResult> run_batch(const std::vector<MissionConfig>& configs, int jobs = 1);

RunRow make_row(const std::string& study, const MissionConfig& cfg, const MissionResult& result);

// Pure folds over raw rows: eta_t per parameter point, in first-seen order.
std::vector<PointSummary> summarize_eta(const std::vector<RunRow>& rows);
// Per-agent effectiveness (tally / cost) over rows, one summary per agent id.
std::vector<PointSummary> summarize_agents(const std::vector<RunRow>& rows);

StudyReport run_fairness(const MissionConfig& config, int runs, std::uint64_t seed_base = 1, int jobs = 1);
StudyReport run_margin_sweep(const SweepSpec& spec, int jobs = 1);
// Per-map mu curves. The significance test compares test_mu (default: the
// best mu on that map) against mu = 0, one-sided, with D0 = d0_fraction * mean(eta at mu = 0).
StudyReport run_coordination_study(const MissionConfig& config, const std::vector<double>& mus, int runs,
                                   const std::vector<std::string>& maps, double d0_fraction = 0.15,
                                   std::optional<double> test_mu = std::nullopt, std::uint64_t seed_base = 1,
                                   int jobs = 1);
StudyReport run_baseline_comparison(const MissionConfig& config, const std::vector<double>& ratios, int runs,
                                    std::uint64_t seed_base = 1, int jobs = 1);

// Estimated rho_h/rho_g where the hunter-gatherer curve drops to the baseline
// curve, by linear interpolation between the bracketing grid points.
std::optional<double> estimate_crossover(const std::vector<double>& ratios, const std::vector<double>& hg_eta,
                                         const std::vector<double>& baseline_eta);

std::string raw_csv(const std::vector<RunRow>& rows);
std::vector<RunRow> parse_raw_csv(const std::string& text);
std::string summary_csv(const std::vector<PointSummary>& summaries);
std::string report_text(const StudyReport& report);

// Writes raw.csv, summary.csv and report.txt into `dir`.
void write_study(const StudyReport& report, const std::string& dir);

}  // namespace hgsim
