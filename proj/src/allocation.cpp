#include "hgsim/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hgsim {

MarginBand band_of(const Margins& margins, std::optional<double> distance) {
    if (!distance) return MarginBand::None;
    if (*distance < margins.r_c) return MarginBand::Cpm;
    if (*distance < margins.r_u) return MarginBand::Upm;
    return MarginBand::None;
}

ClassifiedJobs classify(const Margins& margins, std::span<const JobRecord* const> jobs,
                        const DistanceFn& distance_from_agent) {
    ClassifiedJobs out;
    for (const JobRecord* job : jobs) {
        auto d = distance_from_agent(job->pos);
        switch (band_of(margins, d)) {
            case MarginBand::Cpm: out.cpm.push_back({job, *d}); break;
            case MarginBand::Upm: out.upm.push_back({job, *d}); break;
            case MarginBand::None: break;
        }
    }
    auto order = [](const ClassifiedJob& a, const ClassifiedJob& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.job->pos < b.job->pos;
    };
    std::sort(out.cpm.begin(), out.cpm.end(), order);
    std::sort(out.upm.begin(), out.upm.end(), order);
    return out;
}

std::vector<const JobRecord*> neighborhood(const JobRecord& candidate, int r_c,
                                           std::span<const JobRecord* const> jobs,
                                           const DistanceFn& distance_from_candidate) {
    std::vector<const JobRecord*> hood;
    for (const JobRecord* job : jobs) {
        if (job == &candidate) {
            hood.push_back(job);
            continue;
        }
        auto d = distance_from_candidate(job->pos);
        if (d && *d < r_c) hood.push_back(job);
    }
    return hood;
}

namespace {

double checked(double distance, double hood_size, double factor_sum) {
    if (!(distance > 0.0)) throw std::invalid_argument("expected gain needs a positive distance");
    if (factor_sum < 1.0) throw std::invalid_argument("expected gain needs a nonzero collective factor");
    return hood_size / (distance * factor_sum);
}

double sum_cf(std::span<const JobRecord* const> hood) {
    double s = 0.0;
    for (const JobRecord* j : hood) s += j->cf();
    return s;
}

double sum_cf_uf(std::span<const JobRecord* const> hood) {
    double s = 0.0;
    for (const JobRecord* j : hood) s += j->cf() + j->uf();
    return s;
}

double coordination(int frontiers_nearby, double mu) {
    if (mu < 0.0) throw std::invalid_argument("coordination coefficient must be non-negative");
    return 1.0 + mu * frontiers_nearby;
}

}  // namespace

double frontier_eg_cpm(double distance, std::span<const JobRecord* const> hood) {
    return checked(distance, static_cast<double>(hood.size()), sum_cf(hood));
}

double frontier_eg_upm(double distance, std::span<const JobRecord* const> hood) {
    return checked(distance, static_cast<double>(hood.size()), sum_cf_uf(hood));
}

double task_eg_cpm(double distance, std::span<const JobRecord* const> hood, int frontiers_nearby, double mu) {
    return checked(distance, static_cast<double>(hood.size()), sum_cf(hood)) *
           coordination(frontiers_nearby, mu);
}

double task_eg_upm(double distance, std::span<const JobRecord* const> hood, int frontiers_nearby, double mu) {
    return checked(distance, static_cast<double>(hood.size()), sum_cf_uf(hood)) *
           coordination(frontiers_nearby, mu);
}

std::optional<EgScore> select_best(std::span<const EgScore> scores) {
    std::optional<EgScore> best;
    for (const EgScore& s : scores) {
        if (!best || s.value > best->value ||
            (s.value == best->value &&
             (s.distance < best->distance || (s.distance == best->distance && s.pos < best->pos)))) {
            best = s;
        }
    }
    return best;
}

}  // namespace hgsim
