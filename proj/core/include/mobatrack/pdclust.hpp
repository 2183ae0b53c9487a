#pragma once

// Permutation-distribution clustering of time series: ordinal-pattern
// histograms, squared Hellinger dissimilarities, PAM k-medoids, FANNY fuzzy
// clustering and silhouette diagnostics.

#include "mobatrack/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mobatrack::pdclust {

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 7;
inline constexpr int kDefaultDimension = 5;
inline constexpr int kDefaultClusters = 3;
inline constexpr double kDefaultMembershipExponent = 1.15;

std::size_t factorial(int m);

/// Lexicographic rank of a permutation of 0..m-1 (identity -> 0).
std::size_t permutation_rank(std::span<const int> perm);

/// Inverse of permutation_rank.
std::vector<int> permutation_unrank(int m, std::size_t rank);

/// Indices of `m` samples spaced by `delay`, ordered by value; equal values
/// keep their original order.
std::vector<int> ordinal_pattern(std::span<const double> series, std::size_t start, int m, int delay = 1);

struct PermDistribution {
    int m = 0;
    int delay = 1;
    std::vector<double> freqs;  // indexed by permutation_rank, length m!
};

/// Relative frequencies of the ordinal patterns of every window.
/// Requires 2 <= m <= 7, delay >= 1 and length >= (m - 1) * delay + 1.
PermDistribution perm_distribution(std::span<const double> series, int m, int delay = 1);

/// Squared Hellinger distance sum (sqrt(p) - sqrt(q))^2, in [0, 2].
double pd_divergence(const PermDistribution& p, const PermDistribution& q);

/// Shannon entropy divided by log(m!), in [0, 1].
double normalized_entropy(const PermDistribution& p);

/// Symmetric N x N matrix with zero diagonal and optional series ids.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    explicit DissimilarityMatrix(std::size_t n, std::vector<std::string> ids = {});

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v);

    const std::vector<std::string>& ids() const { return ids_; }

    /// Header row of ids, then one row of N values per series.
    void write_csv(std::ostream& out) const;

    /// Throws FormatError unless the table is square, symmetric, non-negative
    /// and zero on the diagonal.
    static DissimilarityMatrix read_csv(std::istream& in);

    friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
    std::vector<std::string> ids_;
};

/// Computes every distribution once, then diverges all pairs.
DissimilarityMatrix distance_matrix(std::span<const std::vector<double>> series, int m, int delay = 1,
                                    std::vector<std::string> ids = {}, std::size_t workers = 1);

/// Embedding dimension in [m_min, m_max] minimizing mean normalized pattern
/// entropy; ties go to the smaller m. The range is cut to what the shortest
/// series supports; an empty range throws std::invalid_argument.
int min_entropy_dimension(std::span<const std::vector<double>> series, int m_min = kMinDimension,
                          int m_max = kMaxDimension, int delay = 1);

struct PamResult {
    std::vector<std::size_t> medoids;  // sorted; cluster c has medoid medoids[c]
    std::vector<int> assignment;
    double cost = 0.0;        // sum of distances to assigned medoid
    double build_cost = 0.0;  // cost after BUILD, before SWAP
    std::vector<double> cost_trace;
};

/// Total cost of assigning every point to its nearest medoid.
double medoid_cost(const DissimilarityMatrix& d, std::span<const std::size_t> medoids);

/// Nearest-medoid labels; ties go to the lower cluster index.
std::vector<int> assign_to_medoids(const DissimilarityMatrix& d, std::span<const std::size_t> medoids);

/// Partitioning Around Medoids: greedy BUILD, then best-improvement SWAP
/// until no swap lowers the cost. `seed` only breaks exact ties.
PamResult pam(const DissimilarityMatrix& d, int k, std::uint64_t seed = 0);

struct FuzzyResult {
    int k = 0;
    double r = kDefaultMembershipExponent;
    std::size_t n = 0;
    std::vector<double> memberships;  // n x k, row-major
    double objective = 0.0;
    std::vector<double> objective_trace;  // initial value first
    int iterations = 0;
    bool converged = false;
    std::vector<int> crisp;  // argmax membership per row, ties to lower index
    double partition_coefficient = 0.0;

    double membership(std::size_t i, int v) const { return memberships[i * static_cast<std::size_t>(k) + v]; }
};

/// FANNY objective sum_v [sum_ij u_iv^r u_jv^r d_ij] / [2 sum_j u_jv^r].
double fanny_objective(const DissimilarityMatrix& d, std::span<const double> memberships, int k, double r);

/// Fuzzy clustering of a dissimilarity matrix. Memberships start from the
/// PAM partition (0.9 on the assigned cluster, 0.1 / (k - 1) elsewhere) and
/// are updated by relational fuzzy c-means steps until the relative change
/// of the objective drops below `tol`. For dissimilarities that are squared
/// Euclidean distances (squared Hellinger is) each step cannot raise the
/// objective. Hitting max_iter returns with converged = false.
FuzzyResult fanny(const DissimilarityMatrix& d, int k, double r = kDefaultMembershipExponent, double tol = 1e-9,
                  int max_iter = 500, std::uint64_t seed = 0);

struct SilhouetteResult {
    std::vector<double> widths;
    std::vector<int> neighbor;  // nearest other cluster per point
    std::vector<double> cluster_average;  // indexed by label, NaN for empty labels
    double average = 0.0;
};

/// Rousseeuw silhouettes; members of singleton clusters score 0. Needs at
/// least two distinct labels.
SilhouetteResult silhouette(const DissimilarityMatrix& d, std::span<const int> assignment);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct SeriesInfo {
    std::string id;
    SkillTier tier = SkillTier::Normal;
    bool win = false;
    std::span<const double> values;
};

struct FacetCount {
    SkillTier tier = SkillTier::Normal;
    bool win = false;
    std::size_t count = 0;
};

struct ClusterSummary {
    int label = 0;
    std::size_t count = 0;
    double mean_of_means = 0.0;
    double variance_of_means = 0.0;  // sample variance, 0 for one member
    double mean_duration_s = 0.0;    // series length minus one
    std::vector<FacetCount> facets;  // non-zero (tier, outcome) cells
};

struct ClusterReport {
    std::vector<ClusterSummary> clusters;  // labels 0..max present
    double average_silhouette = 0.0;       // NaN when not supplied
};

ClusterReport cluster_report(std::span<const SeriesInfo> series, std::span<const int> assignment,
                             const SilhouetteResult* silhouette = nullptr);

struct ClusterConfig {
    int k = kDefaultClusters;
    double r = kDefaultMembershipExponent;
    int m = kDefaultDimension;
    int delay = 1;
    std::uint64_t seed = 0;
};

/// JSON document with the configuration echo, per-cluster summaries, per-series
/// memberships and silhouettes, and the PAM comparison.
std::string cluster_report_json(const ClusterConfig& config, std::span<const SeriesInfo> series,
                                const FuzzyResult& fuzzy, const SilhouetteResult& fuzzy_silhouette,
                                const ClusterReport& report, const PamResult& pam_result,
                                const SilhouetteResult& pam_silhouette);

}  // namespace mobatrack::pdclust
