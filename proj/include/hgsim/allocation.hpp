#pragma once

#include "hgsim/board.hpp"
#include "hgsim/pathing.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hgsim {

// Profit margins in travel steps: CPM is d < r_c, UPM is r_c <= d < r_u.
struct Margins {
    int r_c = 0;
    int r_u = 0;

    bool valid() const noexcept { return r_c > 0 && r_c < r_u; }
};

struct ClassifiedJob {
    const JobRecord* job = nullptr;
    double distance = 0.0;
};

struct ClassifiedJobs {
    std::vector<ClassifiedJob> cpm;
    std::vector<ClassifiedJob> upm;
};

MarginBand band_of(const Margins& margins, std::optional<double> distance);

// Partitions jobs into CPM and UPM, each ordered by (distance, y, x). Jobs at
// or beyond r_u, or unreachable, are dropped.
ClassifiedJobs classify(const Margins& margins, std::span<const JobRecord* const> jobs,
                        const DistanceFn& distance_from_agent);

// Jobs from `jobs` strictly closer than r_c to the candidate, the candidate
// itself included. Result keeps the input order.
std::vector<const JobRecord*> neighborhood(const JobRecord& candidate, int r_c,
                                           std::span<const JobRecord* const> jobs,
                                           const DistanceFn& distance_from_candidate);

// Expected-gain scores. `hood` is the candidate's neighbourhood of jobs of the
// same kind; `frontiers_nearby` counts frontiers inside the candidate's CPM.
double frontier_eg_cpm(double distance, std::span<const JobRecord* const> hood);
double frontier_eg_upm(double distance, std::span<const JobRecord* const> hood);
double task_eg_cpm(double distance, std::span<const JobRecord* const> hood, int frontiers_nearby, double mu);
double task_eg_upm(double distance, std::span<const JobRecord* const> hood, int frontiers_nearby, double mu);

struct EgScore {
    JobKey key;
    CellPos pos;
    double distance = 0.0;
    double value = 0.0;
};

// Highest value wins; ties go to the smaller distance, then smaller (y, x).
std::optional<EgScore> select_best(std::span<const EgScore> scores);

}  // namespace hgsim
