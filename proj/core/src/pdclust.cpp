#include "mobatrack/pdclust.hpp"

#include "mobatrack/parallel.hpp"
#include "mobatrack/trajectory_csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace mobatrack::pdclust {

namespace {

void check_dimension(int m, int delay) {
    if (m < kMinDimension || m > kMaxDimension) {
        throw std::invalid_argument("embedding dimension " + std::to_string(m) + " outside [2,7]");
    }
    if (delay < 1) throw std::invalid_argument("delay must be at least 1");
}

std::size_t min_length(int m, int delay) { return static_cast<std::size_t>((m - 1) * delay + 1); }

// Picks one of several exactly tied candidates.
std::size_t pick(const std::vector<std::size_t>& tied, std::mt19937_64& rng) {
    if (tied.size() == 1) return tied.front();
    return tied[static_cast<std::size_t>(rng() % tied.size())];
}

void check_k(const DissimilarityMatrix& d, int k, bool allow_k_equal_n) {
    const auto n = static_cast<int>(d.size());
    if (k < 2 || k > n || (!allow_k_equal_n && k == n)) {
        throw std::invalid_argument("cluster count k=" + std::to_string(k) + " out of range for " +
                                    std::to_string(n) + " objects");
    }
}

}  // namespace

std::size_t factorial(int m) {
    std::size_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::size_t>(i);
    return f;
}

std::size_t permutation_rank(std::span<const int> perm) {
    const int m = static_cast<int>(perm.size());
    std::size_t rank = 0;
    for (int i = 0; i < m; ++i) {
        std::size_t smaller = 0;
        for (int j = i + 1; j < m; ++j) {
            if (perm[j] < perm[i]) ++smaller;
        }
        rank += smaller * factorial(m - 1 - i);
    }
    return rank;
}

std::vector<int> permutation_unrank(int m, std::size_t rank) {
    std::vector<int> pool(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> perm;
    perm.reserve(pool.size());
    for (int i = m - 1; i >= 0; --i) {
        const std::size_t f = factorial(i);
        const std::size_t digit = rank / f;
        rank %= f;
        perm.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return perm;
}

std::vector<int> ordinal_pattern(std::span<const double> series, std::size_t start, int m, int delay) {
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    auto value = [&](int i) { return series[start + static_cast<std::size_t>(i * delay)]; };
    // Insertion sort: stable, and m is tiny.
    for (int i = 1; i < m; ++i) {
        const int cur = idx[i];
        int j = i - 1;
        while (j >= 0 && value(idx[j]) > value(cur)) {
            idx[j + 1] = idx[j];
            --j;
        }
        idx[j + 1] = cur;
    }
    return idx;
}

PermDistribution perm_distribution(std::span<const double> series, int m, int delay) {
    check_dimension(m, delay);
    const std::size_t need = min_length(m, delay);
    if (series.size() < need) {
        throw std::invalid_argument("series of length " + std::to_string(series.size()) + " too short for m=" +
                                    std::to_string(m) + ", delay=" + std::to_string(delay));
    }
    PermDistribution pd;
    pd.m = m;
    pd.delay = delay;
    std::vector<std::size_t> counts(factorial(m), 0);
    const std::size_t windows = series.size() - need + 1;
    for (std::size_t s = 0; s < windows; ++s) {
        const auto pattern = ordinal_pattern(series, s, m, delay);
        ++counts[permutation_rank(pattern)];
    }
    pd.freqs.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        pd.freqs[i] = static_cast<double>(counts[i]) / static_cast<double>(windows);
    }
    return pd;
}

double pd_divergence(const PermDistribution& p, const PermDistribution& q) {
    if (p.m != q.m || p.delay != q.delay || p.freqs.size() != q.freqs.size()) {
        throw std::invalid_argument("permutation distributions differ in m or delay");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.freqs.size(); ++i) {
        const double diff = std::sqrt(p.freqs[i]) - std::sqrt(q.freqs[i]);
        sum += diff * diff;
    }
    return sum;
}

double normalized_entropy(const PermDistribution& p) {
    double h = 0.0;
    for (double f : p.freqs) {
        if (f > 0.0) h -= f * std::log(f);
    }
    return h / std::log(static_cast<double>(p.freqs.size()));
}

DissimilarityMatrix::DissimilarityMatrix(std::size_t n, std::vector<std::string> ids)
    : n_(n), data_(n * n, 0.0), ids_(std::move(ids)) {
    if (ids_.empty()) {
        for (std::size_t i = 0; i < n_; ++i) ids_.push_back(std::to_string(i));
    }
    if (ids_.size() != n_) throw std::invalid_argument("id count does not match matrix size");
}

void DissimilarityMatrix::set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
}

void DissimilarityMatrix::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < n_; ++i) out << (i ? "," : "") << ids_[i];
    out << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) out << (j ? "," : "") << csv::format_double((*this)(i, j));
        out << '\n';
    }
}

DissimilarityMatrix DissimilarityMatrix::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("dissimilarity CSV is empty");
    auto ids = csv::split(line);
    const std::size_t n = ids.size();
    DissimilarityMatrix d(n, std::move(ids));
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (row >= n) throw FormatError("dissimilarity CSV has more rows than ids");
        const auto f = csv::split(line);
        if (f.size() != n) throw FormatError("dissimilarity row " + std::to_string(row) + " has wrong width");
        for (std::size_t j = 0; j < n; ++j) {
            const double v = csv::parse_double(f[j], "dissimilarity");
            if (!(v >= 0.0) || std::isinf(v)) throw FormatError("dissimilarities must be finite and non-negative");
            d.data_[row * n + j] = v;
        }
        ++row;
    }
    if (row != n) throw FormatError("dissimilarity CSV is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (d(i, i) != 0.0) throw FormatError("dissimilarity diagonal must be zero");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d(i, j) != d(j, i)) throw FormatError("dissimilarity matrix is not symmetric");
        }
    }
    return d;
}

DissimilarityMatrix distance_matrix(std::span<const std::vector<double>> series, int m, int delay,
                                    std::vector<std::string> ids, std::size_t workers) {
    check_dimension(m, delay);
    const std::size_t n = series.size();
    std::vector<PermDistribution> dists(n);
    parallel_for(n, workers, [&](std::size_t i) { dists[i] = perm_distribution(series[i], m, delay); });

    // Square roots once per bin; each pair is then a plain squared difference.
    std::vector<std::vector<double>> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        roots[i].resize(dists[i].freqs.size());
        std::transform(dists[i].freqs.begin(), dists[i].freqs.end(), roots[i].begin(),
                       [](double f) { return std::sqrt(f); });
    }

    DissimilarityMatrix d(n, std::move(ids));
    parallel_for(n, workers, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            const auto& a = roots[i];
            const auto& b = roots[j];
            for (std::size_t s = 0; s < a.size(); ++s) {
                const double diff = a[s] - b[s];
                sum += diff * diff;
            }
            d.set(i, j, sum);
        }
    });
    return d;
}

int min_entropy_dimension(std::span<const std::vector<double>> series, int m_min, int m_max, int delay) {
    if (series.empty()) throw std::invalid_argument("no series for dimension selection");
    m_min = std::max(m_min, kMinDimension);
    m_max = std::min(m_max, kMaxDimension);
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const auto& s : series) shortest = std::min(shortest, s.size());
    while (m_max >= m_min && shortest < min_length(m_max, delay)) --m_max;
    if (m_max < m_min) throw std::invalid_argument("series too short for every embedding dimension in range");

    int best = m_min;
    double best_entropy = std::numeric_limits<double>::infinity();
    for (int m = m_min; m <= m_max; ++m) {
        double total = 0.0;
        for (const auto& s : series) total += normalized_entropy(perm_distribution(s, m, delay));
        const double mean = total / static_cast<double>(series.size());
        if (mean < best_entropy) {
            best_entropy = mean;
            best = m;
        }
    }
    return best;
}

double medoid_cost(const DissimilarityMatrix& d, std::span<const std::size_t> medoids) {
    double cost = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (auto m : medoids) best = std::min(best, d(j, m));
        cost += best;
    }
    return cost;
}

std::vector<int> assign_to_medoids(const DissimilarityMatrix& d, std::span<const std::size_t> medoids) {
    std::vector<int> out(d.size(), 0);
    for (std::size_t j = 0; j < d.size(); ++j) {
        int best = 0;
        for (std::size_t c = 0; c < medoids.size(); ++c) {
            if (medoids[c] == j) {
                best = static_cast<int>(c);
                break;
            }
            if (d(j, medoids[c]) < d(j, medoids[static_cast<std::size_t>(best)])) best = static_cast<int>(c);
        }
        out[j] = best;
    }
    return out;
}

PamResult pam(const DissimilarityMatrix& d, int k, std::uint64_t seed) {
    check_k(d, k, true);
    const std::size_t n = d.size();
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> medoids;
    std::vector<bool> is_medoid(n, false);

    // BUILD: start from the most central object, then add whichever object
    // lowers the total cost the most.
    {
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> tied;
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) total += d(i, j);
            if (total < best) {
                best = total;
                tied.assign(1, i);
            } else if (total == best) {
                tied.push_back(i);
            }
        }
        const auto first = pick(tied, rng);
        medoids.push_back(first);
        is_medoid[first] = true;
    }
    std::vector<double> nearest(n);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = d(j, medoids.front());
    while (medoids.size() < static_cast<std::size_t>(k)) {
        double best = -1.0;
        std::vector<std::size_t> tied;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) gain += std::max(nearest[j] - d(j, c), 0.0);
            if (gain > best) {
                best = gain;
                tied.assign(1, c);
            } else if (gain == best) {
                tied.push_back(c);
            }
        }
        const auto chosen = pick(tied, rng);
        medoids.push_back(chosen);
        is_medoid[chosen] = true;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(j, chosen));
    }

    PamResult result;
    double cost = medoid_cost(d, medoids);
    result.build_cost = cost;
    result.cost_trace.push_back(cost);

    // SWAP: apply the single best improving (medoid, non-medoid) exchange
    // until none remains.
    const double eps = 1e-12;
    while (true) {
        std::vector<std::size_t> nearest_slot(n);
        std::vector<double> first(n);
        std::vector<double> second(n);
        for (std::size_t j = 0; j < n; ++j) {
            first[j] = second[j] = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < medoids.size(); ++s) {
                const double v = d(j, medoids[s]);
                if (v < first[j]) {
                    second[j] = first[j];
                    first[j] = v;
                    nearest_slot[j] = s;
                } else if (v < second[j]) {
                    second[j] = v;
                }
            }
        }
        double best_delta = 0.0;
        std::vector<std::pair<std::size_t, std::size_t>> tied;
        for (std::size_t s = 0; s < medoids.size(); ++s) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double keep = nearest_slot[j] == s ? second[j] : first[j];
                    delta += std::min(keep, d(j, h)) - first[j];
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    tied.assign(1, {s, h});
                } else if (delta == best_delta && !tied.empty()) {
                    tied.emplace_back(s, h);
                }
            }
        }
        if (tied.empty() || best_delta >= -eps * (1.0 + cost)) break;
        const auto [slot, h] = tied.size() == 1 ? tied.front() : tied[rng() % tied.size()];
        is_medoid[medoids[slot]] = false;
        medoids[slot] = h;
        is_medoid[h] = true;
        cost = medoid_cost(d, medoids);
        result.cost_trace.push_back(cost);
    }

    std::sort(medoids.begin(), medoids.end());
    result.medoids = medoids;
    result.assignment = assign_to_medoids(d, medoids);
    result.cost = cost;
    return result;
}

double fanny_objective(const DissimilarityMatrix& d, std::span<const double> memberships, int k, double r) {
    const std::size_t n = d.size();
    double total = 0.0;
    std::vector<double> w(n);
    for (int v = 0; v < k; ++v) {
        double denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::pow(memberships[i * static_cast<std::size_t>(k) + v], r);
            denom += w[i];
        }
        if (denom == 0.0) continue;
        double num = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] == 0.0) continue;
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += w[j] * d(i, j);
            num += w[i] * row;
        }
        total += num / (2.0 * denom);
    }
    return total;
}

FuzzyResult fanny(const DissimilarityMatrix& d, int k, double r, double tol, int max_iter, std::uint64_t seed) {
    check_k(d, k, false);
    if (!(r > 1.0)) throw std::invalid_argument("membership exponent must exceed 1");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");

    const std::size_t n = d.size();
    const auto kk = static_cast<std::size_t>(k);
    FuzzyResult res;
    res.k = k;
    res.r = r;
    res.n = n;

    const PamResult start = pam(d, k, seed);
    res.memberships.assign(n * kk, 0.1 / static_cast<double>(k - 1));
    for (std::size_t i = 0; i < n; ++i) res.memberships[i * kk + static_cast<std::size_t>(start.assignment[i])] = 0.9;

    double objective = fanny_objective(d, res.memberships, k, r);
    res.objective_trace.push_back(objective);

    const double exponent = 1.0 / (r - 1.0);
    std::vector<double> w(n);
    std::vector<double> dist(n * kk);
    std::vector<double> log_dist(kk);
    for (int iter = 1; iter <= max_iter; ++iter) {
        // Squared distance of every object to each implicit cluster centre.
        for (std::size_t v = 0; v < kk; ++v) {
            double total_w = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] = std::pow(res.memberships[i * kk + v], r);
                total_w += w[i];
            }
            if (total_w == 0.0) {
                for (std::size_t i = 0; i < n; ++i) dist[i * kk + v] = std::numeric_limits<double>::infinity();
                continue;
            }
            std::vector<double> dw(n, 0.0);
            double quad = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < n; ++j) row += d(i, j) * w[j];
                dw[i] = row;
                quad += w[i] * row;
            }
            const double self = quad / (2.0 * total_w * total_w);
            for (std::size_t i = 0; i < n; ++i) dist[i * kk + v] = std::max(dw[i] / total_w - self, 0.0);
        }

        for (std::size_t i = 0; i < n; ++i) {
            double* u = &res.memberships[i * kk];
            const double* di = &dist[i * kk];
            std::size_t zeros = 0;
            for (std::size_t v = 0; v < kk; ++v) {
                if (di[v] <= std::numeric_limits<double>::min()) ++zeros;
            }
            if (zeros > 0) {
                for (std::size_t v = 0; v < kk; ++v) {
                    u[v] = di[v] <= std::numeric_limits<double>::min() ? 1.0 / static_cast<double>(zeros) : 0.0;
                }
                continue;
            }
            for (std::size_t v = 0; v < kk; ++v) log_dist[v] = std::log(di[v]);
            for (std::size_t v = 0; v < kk; ++v) {
                double sum = 0.0;
                for (std::size_t w2 = 0; w2 < kk; ++w2) sum += std::exp(exponent * (log_dist[v] - log_dist[w2]));
                u[v] = 1.0 / sum;
            }
        }

        const double next = fanny_objective(d, res.memberships, k, r);
        res.objective_trace.push_back(next);
        res.iterations = iter;
        const double prev = objective;
        objective = next;
        if (std::fabs(prev - next) <= tol * std::max(std::fabs(prev), std::numeric_limits<double>::min())) {
            res.converged = true;
            break;
        }
    }
    res.objective = objective;

    res.crisp.resize(n);
    double pc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* u = &res.memberships[i * kk];
        res.crisp[i] = static_cast<int>(std::max_element(u, u + kk) - u);
        for (std::size_t v = 0; v < kk; ++v) pc += u[v] * u[v];
    }
    res.partition_coefficient = pc / static_cast<double>(n);
    return res;
}

SilhouetteResult silhouette(const DissimilarityMatrix& d, std::span<const int> assignment) {
    const std::size_t n = d.size();
    if (assignment.size() != n) throw std::invalid_argument("assignment length does not match matrix");
    int labels = 0;
    for (int a : assignment) {
        if (a < 0) throw std::invalid_argument("negative cluster label");
        labels = std::max(labels, a + 1);
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(labels), 0);
    for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
    const auto present = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
    if (present < 2) throw std::invalid_argument("silhouette needs at least two non-empty clusters");

    SilhouetteResult res;
    res.widths.assign(n, 0.0);
    res.neighbor.assign(n, -1);
    std::vector<double> sums(sizes.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) sums[static_cast<std::size_t>(assignment[j])] += d(i, j);
        const auto own = static_cast<std::size_t>(assignment[i]);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (c == own || sizes[c] == 0) continue;
            const double mean = sums[c] / static_cast<double>(sizes[c]);
            if (mean < b) {
                b = mean;
                res.neighbor[i] = static_cast<int>(c);
            }
        }
        if (sizes[own] == 1) continue;
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        const double scale = std::max(a, b);
        res.widths[i] = scale > 0.0 ? (b - a) / scale : 0.0;
    }

    res.cluster_average.assign(sizes.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> cluster_sum(sizes.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) cluster_sum[static_cast<std::size_t>(assignment[i])] += res.widths[i];
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] > 0) res.cluster_average[c] = cluster_sum[c] / static_cast<double>(sizes[c]);
    }
    res.average = std::accumulate(res.widths.begin(), res.widths.end(), 0.0) / static_cast<double>(n);
    return res;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw std::invalid_argument("label vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
    std::map<std::pair<int, int>, double> table;
    std::map<int, double> rows;
    std::map<int, double> cols;
    for (std::size_t i = 0; i < n; ++i) {
        table[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    double index = 0.0;
    for (const auto& [key, c] : table) index += comb2(c);
    double sum_rows = 0.0;
    double sum_cols = 0.0;
    for (const auto& [key, c] : rows) sum_rows += comb2(c);
    for (const auto& [key, c] : cols) sum_cols += comb2(c);
    const double expected = sum_rows * sum_cols / comb2(static_cast<double>(n));
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return index == max_index ? 1.0 : 0.0;
    return (index - expected) / (max_index - expected);
}

ClusterReport cluster_report(std::span<const SeriesInfo> series, std::span<const int> assignment,
                             const SilhouetteResult* sil) {
    if (series.size() != assignment.size()) throw std::invalid_argument("assignment length does not match series");
    int labels = 0;
    for (int a : assignment) labels = std::max(labels, a + 1);

    ClusterReport report;
    report.average_silhouette = sil ? sil->average : std::numeric_limits<double>::quiet_NaN();
    for (int c = 0; c < labels; ++c) {
        ClusterSummary s;
        s.label = c;
        std::vector<double> means;
        double duration_sum = 0.0;
        std::map<std::pair<SkillTier, bool>, std::size_t> facets;
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (assignment[i] != c) continue;
            const auto& v = series[i].values;
            const double sum = std::accumulate(v.begin(), v.end(), 0.0);
            means.push_back(v.empty() ? 0.0 : sum / static_cast<double>(v.size()));
            duration_sum += v.empty() ? 0.0 : static_cast<double>(v.size() - 1);
            ++facets[{series[i].tier, series[i].win}];
        }
        s.count = means.size();
        if (s.count > 0) {
            s.mean_of_means = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(s.count);
            if (s.count > 1) {
                double ss = 0.0;
                for (double m : means) ss += (m - s.mean_of_means) * (m - s.mean_of_means);
                s.variance_of_means = ss / static_cast<double>(s.count - 1);
            }
            s.mean_duration_s = duration_sum / static_cast<double>(s.count);
        } else {
            s.mean_of_means = s.variance_of_means = s.mean_duration_s = std::numeric_limits<double>::quiet_NaN();
        }
        for (const auto& [key, count] : facets) s.facets.push_back({key.first, key.second, count});
        report.clusters.push_back(std::move(s));
    }
    return report;
}

std::string cluster_report_json(const ClusterConfig& config, std::span<const SeriesInfo> series,
                                const FuzzyResult& fuzzy, const SilhouetteResult& fuzzy_silhouette,
                                const ClusterReport& report, const PamResult& pam_result,
                                const SilhouetteResult& pam_silhouette) {
    using nlohmann::ordered_json;
    auto number = [](double v) -> ordered_json { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };

    ordered_json doc;
    doc["config"] = {{"k", config.k}, {"r", config.r}, {"m", config.m}, {"delay", config.delay}, {"seed", config.seed}};
    doc["fuzzy"] = {{"objective", fuzzy.objective},
                    {"iterations", fuzzy.iterations},
                    {"converged", fuzzy.converged},
                    {"partition_coefficient", fuzzy.partition_coefficient},
                    {"average_silhouette", number(fuzzy_silhouette.average)}};

    ordered_json clusters = ordered_json::array();
    for (const auto& c : report.clusters) {
        ordered_json facets = ordered_json::array();
        for (const auto& f : c.facets) {
            facets.push_back({{"tier", to_string(f.tier)}, {"outcome", f.win ? "win" : "loss"}, {"count", f.count}});
        }
        const auto label = static_cast<std::size_t>(c.label);
        clusters.push_back({{"cluster", c.label + 1},
                            {"count", c.count},
                            {"mean_of_means", number(c.mean_of_means)},
                            {"variance_of_means", number(c.variance_of_means)},
                            {"mean_duration_s", number(c.mean_duration_s)},
                            {"average_silhouette", label < fuzzy_silhouette.cluster_average.size()
                                                       ? number(fuzzy_silhouette.cluster_average[label])
                                                       : ordered_json(nullptr)},
                            {"facets", facets}});
    }
    doc["clusters"] = clusters;

    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
        ordered_json u = ordered_json::array();
        for (int v = 0; v < fuzzy.k; ++v) u.push_back(fuzzy.membership(i, v));
        rows.push_back({{"id", series[i].id},
                        {"tier", to_string(series[i].tier)},
                        {"outcome", series[i].win ? "win" : "loss"},
                        {"cluster", fuzzy.crisp[i] + 1},
                        {"memberships", u},
                        {"silhouette", fuzzy_silhouette.widths[i]}});
    }
    doc["series"] = rows;

    ordered_json medoids = ordered_json::array();
    for (auto m : pam_result.medoids) medoids.push_back(series[m].id);
    doc["pam"] = {{"cost", pam_result.cost},
                  {"build_cost", pam_result.build_cost},
                  {"medoids", medoids},
                  {"average_silhouette", number(pam_silhouette.average)}};
    return doc.dump(2) + "\n";
}

}  // namespace mobatrack::pdclust
