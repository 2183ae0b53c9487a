#include "mobatrack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mobatrack::stats {

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 20000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_distribution_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::invalid_argument("F distribution needs positive degrees of freedom");
    if (std::isnan(f)) throw std::invalid_argument("F statistic is NaN");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    // P(F > f) = I_{d2 / (d2 + d1 f)}(d2 / 2, d1 / 2)
    const double x = d2 / (d2 + d1 * f);
    return std::clamp(incomplete_beta(d2 / 2.0, d1 / 2.0, x), 0.0, 1.0);
}

std::string format_p_value(double p) {
    if (p < kPValueFloor) return "<2.2e-16";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", p);
    return buf;
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) throw std::invalid_argument("ANOVA needs at least two groups");
    std::size_t total = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("ANOVA group is empty");
        total += g.size();
        for (double v : g) grand_sum += v;
    }
    const std::size_t k = groups.size();
    if (total <= k) throw std::invalid_argument("ANOVA needs more observations than groups");
    const double grand_mean = grand_sum / static_cast<double>(total);

    double ssb = 0.0;
    double ssw = 0.0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (double v : g) sum += v;
        const double mean = sum / static_cast<double>(g.size());
        ssb += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
        for (double v : g) ssw += (v - mean) * (v - mean);
    }

    AnovaResult r;
    r.df_between = static_cast<int>(k - 1);
    r.df_within = static_cast<int>(total - k);
    r.ss_between = ssb;
    r.ss_within = ssw;
    if (ssw == 0.0) {
        if (ssb == 0.0) throw std::domain_error("ANOVA on identical values: no variation to test");
        r.infinite_f = true;
        r.f = std::numeric_limits<double>::infinity();
        r.p = 0.0;
        return r;
    }
    r.f = (ssb / r.df_between) / (ssw / r.df_within);
    r.p = f_distribution_sf(r.f, r.df_between, r.df_within);
    return r;
}

double quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary describe(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("describe() of empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    Summary s;
    s.n = sorted.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.variance = ss / static_cast<double>(s.n - 1);
    }
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile(sorted, 0.25);
    s.median = quantile(sorted, 0.5);
    s.q3 = quantile(sorted, 0.75);
    return s;
}

}  // namespace mobatrack::stats
