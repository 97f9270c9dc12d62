#include "hgsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hgsim::stats {

const char* to_string(Alternative alt) {
    switch (alt) {
        case Alternative::TwoSided: return "two-sided";
        case Alternative::Greater: return "greater";
        case Alternative::Less: return "less";
    }
    return "?";
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a and b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    double value;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        value = front * beta_continued_fraction(a, b, x) / a;
    } else {
        value = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
    }
    return std::clamp(value, 0.0, 1.0);
}

double student_t_sf(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("t distribution: dof must be > 0");
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    const double tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
    return t >= 0.0 ? tail : 1.0 - tail;
}

double student_t_cdf(double t, double dof) { return 1.0 - student_t_sf(t, dof); }

double f_sf(double f, double dof1, double dof2) {
    if (!(dof1 > 0.0) || !(dof2 > 0.0)) throw std::invalid_argument("F distribution: dof must be > 0");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return regularized_incomplete_beta(dof2 / 2.0, dof1 / 2.0, dof2 / (dof2 + dof1 * f));
}

double f_cdf(double f, double dof1, double dof2) { return 1.0 - f_sf(f, dof1, dof2); }

namespace {

template <typename Cdf>
double bisect_quantile(double p, double lo, double hi, Cdf&& cdf) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must lie in (0, 1)");
    while (cdf(hi) < p) hi *= 2.0;
    while (lo < 0.0 && cdf(lo) > p) lo *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
        if (hi - lo < 1e-13 * std::max(1.0, std::fabs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double student_t_quantile(double p, double dof) {
    return bisect_quantile(p, -10.0, 10.0, [&](double t) { return student_t_cdf(t, dof); });
}

double f_quantile(double p, double dof1, double dof2) {
    return bisect_quantile(p, 0.0, 10.0, [&](double f) { return f_cdf(f, dof1, dof2); });
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance needs at least two samples");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double sample_sd(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

namespace {

double t_p_value(double t, double dof, Alternative alt) {
    switch (alt) {
        case Alternative::Greater: return student_t_sf(t, dof);
        case Alternative::Less: return student_t_cdf(t, dof);
        case Alternative::TwoSided: return std::min(1.0, 2.0 * student_t_sf(std::fabs(t), dof));
    }
    return 1.0;
}

}  // namespace

TestReport paired_t_test(std::span<const double> xs, std::span<const double> ys, double d0,
                         Alternative alternative, double alpha) {
    if (xs.size() != ys.size()) throw std::invalid_argument("paired t test: samples differ in length");
    if (xs.size() < 2) throw std::invalid_argument("paired t test: needs at least two pairs");
    std::vector<double> diff(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) diff[i] = xs[i] - ys[i];
    const double n = static_cast<double>(diff.size());
    const double m = mean(diff);
    const double sd = sample_sd(diff);

    TestReport r;
    r.dof1 = n - 1.0;
    r.alternative = alternative;
    r.alpha = alpha;
    if (sd == 0.0) {
        if (m != d0) throw DegenerateSample("paired t test: differences have zero variance");
        // Every difference sits exactly on the hypothesised value.
        r.statistic = 0.0;
        r.p_value = alternative == Alternative::TwoSided ? 1.0 : 0.5;
        return r;
    }
    r.statistic = (m - d0) / (sd / std::sqrt(n));
    r.p_value = t_p_value(r.statistic, r.dof1, alternative);
    return r;
}

TestReport two_sample_t_test(std::span<const double> xs, std::span<const double> ys, double alpha) {
    if (xs.size() < 2 || ys.size() < 2) throw std::invalid_argument("two-sample t test: needs two samples per group");
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    const double pooled = ((n1 - 1.0) * sample_variance(xs) + (n2 - 1.0) * sample_variance(ys)) / (n1 + n2 - 2.0);
    if (pooled == 0.0) throw DegenerateSample("two-sample t test: zero pooled variance");
    TestReport r;
    r.dof1 = n1 + n2 - 2.0;
    r.alpha = alpha;
    r.statistic = (mean(xs) - mean(ys)) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
    r.p_value = t_p_value(r.statistic, r.dof1, Alternative::TwoSided);
    return r;
}

TestReport one_way_anova(const std::vector<std::vector<double>>& groups, double alpha) {
    if (groups.size() < 2) throw std::invalid_argument("ANOVA: needs at least two groups");
    double total = 0.0;
    double n = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw std::invalid_argument("ANOVA: every group needs at least two samples");
        total += std::accumulate(g.begin(), g.end(), 0.0);
        n += static_cast<double>(g.size());
    }
    const double grand = total / n;
    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& g : groups) {
        const double m = mean(g);
        ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        for (double x : g) ss_within += (x - m) * (x - m);
    }
    if (ss_within == 0.0) throw DegenerateSample("ANOVA: zero within-group variance");
    const double k = static_cast<double>(groups.size());
    TestReport r;
    r.dof1 = k - 1.0;
    r.dof2 = n - k;
    r.alpha = alpha;
    r.statistic = (ss_between / r.dof1) / (ss_within / r.dof2);
    r.p_value = f_sf(r.statistic, r.dof1, r.dof2);
    return r;
}

}  // namespace hgsim::stats
