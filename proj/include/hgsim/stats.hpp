#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgsim::stats {

enum class Alternative { TwoSided, Greater, Less };

const char* to_string(Alternative alt);

struct TestReport {
    double statistic = 0.0;  // t or F
    double dof1 = 0.0;
    double dof2 = 0.0;       // 0 for single-dof tests
    double p_value = 1.0;
    Alternative alternative = Alternative::TwoSided;
    double alpha = 0.05;

    bool reject() const noexcept { return p_value < alpha; }
};

struct DegenerateSample : std::domain_error {
    using std::domain_error::domain_error;
};

// I_x(a, b) by Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);
double student_t_sf(double t, double dof);  // P(T > t)
double f_cdf(double f, double dof1, double dof2);
double f_sf(double f, double dof1, double dof2);  // P(F > f)

// Inverse CDFs by bisection; p in (0, 1).
double student_t_quantile(double p, double dof);
double f_quantile(double p, double dof1, double dof2);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // n - 1 divisor
double sample_sd(std::span<const double> xs);

// H0: mean(xs - ys) = d0 (or <=, >= for one-sided alternatives).
TestReport paired_t_test(std::span<const double> xs, std::span<const double> ys, double d0 = 0.0,
                         Alternative alternative = Alternative::TwoSided, double alpha = 0.05);

// Pooled-variance two-sample t test, two-sided.
TestReport two_sample_t_test(std::span<const double> xs, std::span<const double> ys, double alpha = 0.05);

TestReport one_way_anova(const std::vector<std::vector<double>>& groups, double alpha = 0.05);

}  // namespace hgsim::stats
