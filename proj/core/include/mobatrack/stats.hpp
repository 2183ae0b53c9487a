#pragma once

#include <span>
#include <string>
#include <vector>

namespace mobatrack::stats {

/// Values below this print as "<2.2e-16".
inline constexpr double kPValueFloor = 2.2e-16;

struct AnovaResult {
    double f = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p = 1.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    /// Set when every group has zero spread; f is then +inf and p is 0.
    bool infinite_f = false;
};

/// One-way ANOVA. Needs at least two non-empty groups and more values than
/// groups. Throws std::invalid_argument on bad shapes and std::domain_error
/// when every value is identical (nothing to compare).
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Upper tail P(X > f) of the F(d1, d2) distribution.
double f_distribution_sf(double f, double d1, double d2);

/// Renders a p-value, flooring at "<2.2e-16".
std::string format_p_value(double p);

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // N - 1 denominator; 0 for a single value
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quantile by linear interpolation between order statistics.
double quantile(std::span<const double> sorted, double q);

Summary describe(std::span<const double> values);

}  // namespace mobatrack::stats
