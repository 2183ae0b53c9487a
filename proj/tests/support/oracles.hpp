#pragma once

// Slow reference implementations used as independent oracles.

#include "mobatrack/core.hpp"
#include "mobatrack/pdclust.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace mobatrack::oracle {

/// Mean over all ordered pairs i != j.
inline double naive_distance(const std::vector<GridCell>& p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (i == j) continue;
            const double dx = p[i].x() - p[j].x();
            const double dy = p[i].y() - p[j].y();
            sum += std::sqrt(dx * dx + dy * dy);
        }
    }
    const double n = static_cast<double>(p.size());
    return sum / (n * (n - 1.0));
}

/// All permutations of 0..m-1 in lexicographic order.
inline std::vector<std::vector<int>> lex_perms(int m) {
    std::vector<int> p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Pattern frequencies from sorting (value, index) pairs of every window.
inline std::vector<double> permutation_distribution(const std::vector<double>& x, int m, int delay = 1) {
    const auto perms = lex_perms(m);
    std::vector<double> counts(perms.size(), 0.0);
    const std::size_t span = static_cast<std::size_t>((m - 1) * delay);
    const std::size_t windows = x.size() - span;
    for (std::size_t s = 0; s < windows; ++s) {
        std::vector<std::pair<double, int>> w;
        for (int k = 0; k < m; ++k) w.emplace_back(x[s + static_cast<std::size_t>(k * delay)], k);
        std::sort(w.begin(), w.end());
        std::vector<int> pattern;
        for (const auto& [v, k] : w) pattern.push_back(k);
        const auto it = std::find(perms.begin(), perms.end(), pattern);
        counts[static_cast<std::size_t>(it - perms.begin())] += 1.0;
    }
    for (auto& c : counts) c /= static_cast<double>(windows);
    return counts;
}

inline double hellinger(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::pow(std::sqrt(p[i]) - std::sqrt(q[i]), 2.0);
    return s;
}

struct MedoidSearch {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> medoids;
};

/// Best k-medoid set over every subset of size k.
inline MedoidSearch exhaustive_medoids(const pdclust::DissimilarityMatrix& d, int k) {
    const std::size_t n = d.size();
    MedoidSearch best;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<std::size_t> m;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) m.push_back(i);
        }
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (auto j : m) nearest = std::min(nearest, d(i, j));
            cost += nearest;
        }
        if (cost < best.cost) best = {cost, m};
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                               double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m));
    const double frm = f(0.5 * (m + b));
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

// Adaptive Simpson on each of 64 equal panels, to an absolute error of `eps`.
inline double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    constexpr int kPanels = 64;
    const double h = (b - a) / kPanels;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + h * i;
        const double hi = lo + h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(0.5 * (lo + hi));
        total += adaptive_simpson(f, lo, hi, flo, fm, fhi, h / 6 * (flo + 4 * fm + fhi), eps / kPanels, 50);
    }
    return total;
}

}  // namespace detail

/// I_x(a, b) by quadrature after t = sin^2(theta), which removes the endpoint
/// singularities for a, b >= 1/2. The normalizer B(a, b) comes from lgamma.
inline double incomplete_beta(double a, double b, double x) {
    const auto g = [&](double th) { return 2 * std::pow(std::sin(th), 2 * a - 1) * std::pow(std::cos(th), 2 * b - 1); };
    const double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return detail::integrate(g, 0.0, std::asin(std::sqrt(x)), 1e-13 * beta) / beta;
}

/// P(F > f) for F(d1, d2).
inline double f_sf(double f, double d1, double d2) { return incomplete_beta(d2 / 2, d1 / 2, d2 / (d2 + d1 * f)); }

}  // namespace mobatrack::oracle
