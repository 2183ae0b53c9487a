#include "oracles.hpp"

#include "mobatrack/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace mobatrack;
using namespace mobatrack::stats;

TEST_CASE("one-way ANOVA on a hand example") {
    const std::vector<std::vector<double>> g = {{1, 2, 3}, {2, 3, 4}};
    const auto r = one_way_anova(g);
    // means 2 and 3, grand mean 2.5: SSB = 6 * 0.25 = 1.5, SSW = 2 + 2 = 4
    CHECK(r.ss_between == doctest::Approx(1.5));
    CHECK(r.ss_within == doctest::Approx(4.0));
    CHECK(r.df_between == 1);
    CHECK(r.df_within == 4);
    CHECK(r.f == doctest::Approx(1.5));
    CHECK(r.p == doctest::Approx(oracle::f_sf(1.5, 1, 4)).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.2879).epsilon(1e-3));
    CHECK_FALSE(r.infinite_f);
}

TEST_CASE("identical group means give F = 0 and p = 1") {
    const std::vector<std::vector<double>> g = {{1, 3}, {0, 4}, {2, 2}};
    const auto r = one_way_anova(g);
    CHECK(r.f == 0.0);
    CHECK(r.p == 1.0);
}

TEST_CASE("ANOVA shape errors and degenerate spreads") {
    CHECK_THROWS_AS(one_way_anova(std::vector<std::vector<double>>{{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(one_way_anova(std::vector<std::vector<double>>{{1, 2}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(one_way_anova(std::vector<std::vector<double>>{{1}, {2}}), std::invalid_argument);
    CHECK_THROWS_AS(one_way_anova(std::vector<std::vector<double>>{{5, 5}, {5}}), std::domain_error);
    const auto r = one_way_anova(std::vector<std::vector<double>>{{1, 1}, {2, 2}});
    CHECK(r.infinite_f);
    CHECK(std::isinf(r.f));
    CHECK(r.p == 0.0);
}

TEST_CASE("ANOVA is invariant to shifting and positive scaling") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> groups(2 + trial % 4);
        for (auto& grp : groups) {
            grp.resize(2 + static_cast<std::size_t>(trial % 7));
            for (auto& v : grp) v = g(rng) + 0.3 * static_cast<double>(&grp - groups.data());
        }
        const double a = u(rng);
        const double b = 100 * g(rng);
        auto moved = groups;
        for (auto& grp : moved) {
            for (auto& v : grp) v = a * v + b;
        }
        const auto r0 = one_way_anova(groups);
        const auto r1 = one_way_anova(moved);
        CHECK(r1.f == doctest::Approx(r0.f).epsilon(1e-8));
        CHECK(r1.p == doctest::Approx(r0.p).epsilon(1e-8));
        CHECK(r0.p >= 0.0);
        CHECK(r0.p <= 1.0);
    }
}

TEST_CASE("F tail matches closed forms and quadrature") {
    // d2 = 2: I_x(1, b) = 1 - (1 - x)^b
    for (double d1 : {1.0, 2.0, 3.0, 7.0}) {
        for (double f : {0.1, 0.5, 1.0, 2.5, 10.0, 100.0}) {
            const double closed = 1 - std::pow(d1 * f / (2 + d1 * f), d1 / 2);
            CHECK(f_distribution_sf(f, d1, 2) == doctest::Approx(closed).epsilon(1e-12));
        }
    }
    // d1 = 2: I_x(a, 1) = x^a
    for (double d2 : {1.0, 4.0, 17.0, 100.0}) {
        for (double f : {0.1, 1.0, 3.0, 12.0}) {
            const double closed = std::pow(d2 / (d2 + 2 * f), d2 / 2);
            CHECK(f_distribution_sf(f, 2, d2) == doctest::Approx(closed).epsilon(1e-11));
        }
    }
    for (double d1 : {1.0, 3.0, 5.0}) {
        for (double d2 : {4.0, 17.0, 60.0}) {
            for (double f : {0.2, 1.0, 3.7, 9.0}) {
                CHECK(f_distribution_sf(f, d1, d2) == doctest::Approx(oracle::f_sf(f, d1, d2)).epsilon(1e-8));
            }
        }
    }
    CHECK(f_distribution_sf(0.0, 3, 4) == 1.0);
    CHECK(f_distribution_sf(std::numeric_limits<double>::infinity(), 3, 4) == 0.0);
    CHECK_THROWS_AS(f_distribution_sf(1.0, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(f_distribution_sf(std::nan(""), 1, 4), std::invalid_argument);
}

TEST_CASE("p-value falls as F grows") {
    double prev = 1.0;
    for (double f = 0.0; f < 200.0; f += 0.25) {
        const double p = f_distribution_sf(f, 3, 40);
        CHECK(p <= prev);
        prev = p;
    }
    CHECK(prev < 1e-20);
}

TEST_CASE("incomplete beta symmetry") {
    for (double a : {0.5, 1.0, 2.5, 30.0}) {
        for (double b : {0.5, 3.0, 12.0}) {
            for (double x : {0.01, 0.3, 0.5, 0.9}) {
                CHECK(incomplete_beta(a, b, x) + incomplete_beta(b, a, 1 - x) == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
    CHECK(incomplete_beta(2, 3, 0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1) == 1.0);
    CHECK_THROWS_AS(incomplete_beta(0, 3, 0.5), std::invalid_argument);
}

TEST_CASE("p-value formatting floors at 2.2e-16") {
    CHECK(format_p_value(0.5) == "0.5");
    CHECK(format_p_value(0.028786413) == "0.0287864");
    CHECK(format_p_value(1e-10) == "1e-10");
    CHECK(format_p_value(2.2e-16) == "2.2e-16");
    CHECK(format_p_value(1e-17) == "<2.2e-16");
    CHECK(format_p_value(0.0) == "<2.2e-16");
}

TEST_CASE("describe examples") {
    const auto one = describe(std::vector<double>{5});
    CHECK(one.n == 1);
    CHECK(one.mean == 5);
    CHECK(one.variance == 0);
    CHECK(one.q1 == 5);
    CHECK(one.max == 5);

    const auto four = describe(std::vector<double>{4, 1, 3, 2});
    CHECK(four.mean == 2.5);
    CHECK(four.variance == doctest::Approx(5.0 / 3));
    CHECK(four.min == 1);
    CHECK(four.q1 == 1.75);
    CHECK(four.median == 2.5);
    CHECK(four.q3 == 3.25);
    CHECK(four.max == 4);
    CHECK_THROWS_AS(describe(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("describe agrees with running moments") {
    std::mt19937_64 rng(32);
    std::lognormal_distribution<double> g(0.0, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + static_cast<std::size_t>(trial));
        for (auto& x : v) x = g(rng);
        const auto s = describe(v);
        // Welford running moments
        double mean = 0;
        double m2 = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double delta = v[i] - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (v[i] - mean);
        }
        CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
        if (v.size() > 1) CHECK(s.variance == doctest::Approx(m2 / static_cast<double>(v.size() - 1)).epsilon(1e-10));
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        // the median of an odd-sized sample is its middle order statistic
        if (v.size() % 2 == 1) CHECK(s.median == sorted[v.size() / 2]);
        CHECK(s.min <= s.q1);
        CHECK(s.q1 <= s.median);
        CHECK(s.median <= s.q3);
        CHECK(s.q3 <= s.max);
    }
}
