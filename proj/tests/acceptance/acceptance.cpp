// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include "fixtures.hpp"
#include "oracles.hpp"
#include "run_config.hpp"

#include "mobatrack/measures.hpp"
#include "mobatrack/pdclust.hpp"
#include "mobatrack/stats.hpp"
#include "mobatrack/synth.hpp"
#include "mobatrack/tickstream.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace mobatrack;

namespace {

// Tolerances and budgets.
constexpr double kDistanceTolerance = 1e-9;
constexpr double kDistanceBudgetS = 1.0;
constexpr int kRoundTripStreams = 500;
constexpr int kMutatedStreams = 100;
constexpr double kTickstreamBudgetS = 5.0;
constexpr int kDwellSequences = 200;
constexpr int kPdMaxLength = 10;
constexpr int kPdInvarianceSeries = 100;
constexpr int kPlantedMatrices = 50;
constexpr double kPamCostTolerance = 1e-12;
constexpr double kObjectiveSlack = 1e-12;
constexpr double kBlockWithin = 0.05;
constexpr double kBlockBetween = 1.0;
constexpr double kMinBlockSilhouette = 0.9;
constexpr double kQuadratureTolerance = 1e-8;
constexpr double kInvarianceTolerance = 1e-9;
constexpr int kRepetitions = 100;
constexpr int kRequiredOrdered = 95;
constexpr int kMatchesPerRegime = 30;
constexpr Seconds kRegimeMatchLength = 900;
constexpr double kAnovaAlpha = 1e-3;
constexpr double kEndToEndBudgetS = 120.0;
constexpr std::size_t kPerfSeries = 380;
constexpr std::size_t kPerfLength = 3000;
constexpr double kPerfBudgetS = 5.0;
constexpr double kMaxDoublingRatio = 2.5;
constexpr int kPerfRuns = 5;

struct Verdict {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

Verdict team_distance_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> cell(0, kMaxCellIndex);
    Stopwatch watch;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<GridCell> team;
        for (int p = 0; p < kPlayersPerTeam; ++p) team.emplace_back(cell(rng), cell(rng));
        worst = std::max(worst, std::abs(measures::team_distance(team) - oracle::naive_distance(team)));
    }
    const double t = watch.seconds();
    return {worst <= kDistanceTolerance && t < kDistanceBudgetS,
            "1000 sets, max |diff| " + fmt(worst) + ", " + fmt(t) + " s"};
}

void put_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
    b[at] = static_cast<std::uint8_t>(v);
    b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b[at + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
}

// Byte offset of every frame start, plus the end of the stream.
std::vector<std::size_t> frame_offsets(const tickstream::DecodedStream& s) {
    std::vector<std::size_t> out = {tickstream::kHeaderSize};
    for (const auto& f : s.frames) out.push_back(out.back() + tickstream::kFrameHeaderSize + f.updates.size() * tickstream::kUpdateSize);
    return out;
}

// Applies one of several corruptions that no valid stream can contain.
std::vector<std::uint8_t> mutate(std::mt19937_64& rng, const tickstream::DecodedStream& s, std::vector<std::uint8_t> b,
                                 int kind) {
    const auto frames = frame_offsets(s);
    auto update_at = [&](std::size_t frame, std::size_t u) {
        return frames[frame] + tickstream::kFrameHeaderSize + u * tickstream::kUpdateSize;
    };
    const std::size_t key_updates = s.frames[0].updates.size();
    std::uniform_int_distribution<std::size_t> any_key_update(0, key_updates - 1);
    switch (kind) {
        case 0: {
            const std::size_t at = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
            b[at] ^= static_cast<std::uint8_t>(std::uniform_int_distribution<int>(1, 255)(rng));
            break;
        }
        case 1:
            put_u16(b, 4, static_cast<std::uint16_t>(std::uniform_int_distribution<int>(2, 65535)(rng)));
            break;
        case 2: {
            // cut anywhere except a frame boundary past the keyframe
            const std::set<std::size_t> boundaries(frames.begin() + 1, frames.end());
            std::size_t cut = 0;
            do {
                cut = std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng);
            } while (boundaries.count(cut) > 0);
            b.resize(cut);
            break;
        }
        case 3:
            b[update_at(0, any_key_update(rng)) + 1 + std::uniform_int_distribution<std::size_t>(0, 1)(rng)] =
                static_cast<std::uint8_t>(std::uniform_int_distribution<int>(kGridSize, 255)(rng));
            break;
        case 4: {
            std::set<std::uint8_t> known;
            for (const auto& p : s.header.players) known.insert(p.entity_id);
            std::uint8_t id = 0;
            do {
                id = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 255)(rng));
            } while (known.count(id) > 0);
            b[update_at(0, any_key_update(rng))] = id;
            break;
        }
        case 5: {
            const std::size_t u = any_key_update(rng);
            const std::size_t other = (u + 1) % key_updates;
            b[update_at(0, u)] = b[update_at(0, other)];
            break;
        }
        case 6: {
            const float bad = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? std::numeric_limits<float>::quiet_NaN()
                                                                                 : std::numeric_limits<float>::infinity();
            std::uint32_t bits = 0;
            std::memcpy(&bits, &bad, sizeof bits);
            put_u32(b, update_at(0, any_key_update(rng)) + 3 + 4 * std::uniform_int_distribution<std::size_t>(0, 1)(rng), bits);
            break;
        }
        default: {
            if (s.frames.size() < 2) return mutate(rng, s, std::move(b), 2);
            const std::size_t f = std::uniform_int_distribution<std::size_t>(1, s.frames.size() - 1)(rng);
            put_u32(b, frames[f], s.frames[f - 1].tick);
            break;
        }
    }
    return b;
}

Verdict tickstream_round_trip() {
    std::mt19937_64 rng(202);
    Stopwatch watch;
    int exact = 0;
    for (int i = 0; i < kRoundTripStreams; ++i) {
        const auto s = testing::random_stream(rng);
        const auto bytes = tickstream::encode(s.header, s.frames);
        const auto back = tickstream::decode(bytes);
        if (back == s && tickstream::encode(back.header, back.frames) == bytes) ++exact;
    }
    int rejected = 0;
    for (int i = 0; i < kMutatedStreams; ++i) {
        const auto s = testing::random_stream(rng);
        const auto bad = mutate(rng, s, tickstream::encode(s.header, s.frames), i % 8);
        try {
            tickstream::decode(bad);
        } catch (const tickstream::DecodeError& e) {
            if (std::string(e.what()).find("byte offset") != std::string::npos) ++rejected;
        }
    }
    const double t = watch.seconds();
    return {exact == kRoundTripStreams && rejected == kMutatedStreams && t < kTickstreamBudgetS,
            std::to_string(exact) + "/" + std::to_string(kRoundTripStreams) + " bit-exact, " + std::to_string(rejected) + "/" +
                std::to_string(kMutatedStreams) + " mutants rejected, " + fmt(t) + " s"};
}

std::vector<ZoneLabel> zone_runs(std::initializer_list<std::pair<ZoneLabel, int>> spec) {
    std::vector<ZoneLabel> out;
    for (const auto& [z, n] : spec) {
        for (int i = 0; i < n; ++i) out.push_back(z);
    }
    return out;
}

Verdict dwell_rule() {
    constexpr ZoneLabel A = ZoneLabel::TopLane;
    constexpr ZoneLabel B = ZoneLabel::River;
    constexpr ZoneLabel C = ZoneLabel::Jungle;
    const auto merged = measures::change_count(measures::dwell_filter(zone_runs({{A, 6}, {B, 3}, {A, 5}}), 5));
    const auto three = measures::change_count(measures::dwell_filter(zone_runs({{A, 10}, {B, 6}, {C, 10}}), 5));

    std::mt19937_64 rng(303);
    std::uniform_int_distribution<int> zone(0, 3);
    std::uniform_int_distribution<int> run(1, 12);
    int monotone = 0;
    for (int i = 0; i < kDwellSequences; ++i) {
        std::vector<ZoneLabel> seq;
        while (seq.size() < 300) {
            const auto z = kZoneLabels[static_cast<std::size_t>(zone(rng))];
            seq.insert(seq.end(), static_cast<std::size_t>(run(rng)), z);
        }
        bool ok = true;
        std::size_t prev = std::numeric_limits<std::size_t>::max();
        for (Seconds d = 1; d <= 20; ++d) {
            const auto c = measures::change_count(measures::dwell_filter(seq, d));
            ok = ok && c <= prev;
            prev = c;
        }
        if (ok) ++monotone;
    }
    return {merged == 0 && three == 2 && monotone == kDwellSequences,
            "fixtures give " + std::to_string(merged) + " and " + std::to_string(three) + " changes, monotone on " +
                std::to_string(monotone) + "/" + std::to_string(kDwellSequences)};
}

Verdict permutation_distribution() {
    std::size_t checked = 0;
    std::size_t mismatched = 0;
    for (int len = 2; len <= kPdMaxLength; ++len) {
        std::vector<double> x(static_cast<std::size_t>(len), 1.0);
        while (true) {
            for (int m = 2; m <= 3; ++m) {
                if (len < m) continue;
                ++checked;
                if (pdclust::perm_distribution(x, m).freqs != oracle::permutation_distribution(x, m)) ++mismatched;
            }
            std::size_t i = 0;
            while (i < x.size() && x[i] == 3.0) x[i++] = 1.0;
            if (i == x.size()) break;
            x[i] += 1.0;
        }
    }

    std::mt19937_64 rng(404);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    std::uniform_real_distribution<double> shift(-1000.0, 1000.0);
    int invariant = 0;
    for (int i = 0; i < kPdInvarianceSeries; ++i) {
        std::vector<double> x(500);
        for (auto& v : x) v = g(rng);
        const double a = scale(rng);
        const double b = shift(rng);
        std::vector<double> y;
        for (double v : x) y.push_back(a * v + b);
        bool same = true;
        for (int m = 2; m <= 7; ++m) same = same && pdclust::perm_distribution(x, m).freqs == pdclust::perm_distribution(y, m).freqs;
        if (same) ++invariant;
    }
    return {mismatched == 0 && invariant == kPdInvarianceSeries,
            std::to_string(checked - mismatched) + "/" + std::to_string(checked) + " exhaustive cases exact, affine-invariant on " +
                std::to_string(invariant) + "/" + std::to_string(kPdInvarianceSeries)};
}

pdclust::DissimilarityMatrix planted_points(std::mt19937_64& rng, std::size_t n, int k) {
    std::normal_distribution<double> noise(0.0, 1.5);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const int c = static_cast<int>(i % static_cast<std::size_t>(k));
        pts.emplace_back(10.0 * c + noise(rng), 7.0 * (c % 2) + noise(rng));
    }
    pdclust::DissimilarityMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d.set(i, j, std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second));
        }
    }
    return d;
}

bool non_increasing(const std::vector<double>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i] > trace[i - 1] * (1 + kObjectiveSlack) + kObjectiveSlack) return false;
    }
    return true;
}

Verdict clustering_oracles() {
    std::mt19937_64 rng(505);
    int pam_optimal = 0;
    for (int i = 0; i < kPlantedMatrices; ++i) {
        const int k = 2 + i % 3;
        const auto d = planted_points(rng, 8, k);
        const auto r = pdclust::pam(d, k);
        const auto best = oracle::exhaustive_medoids(d, k);
        if (std::abs(r.cost - best.cost) <= kPamCostTolerance * std::max(1.0, best.cost)) ++pam_optimal;
    }

    // 3-block matrix: blocks of 7, 7 and 6 points
    constexpr std::size_t kPoints = 20;
    std::vector<int> truth(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i) truth[i] = i < 7 ? 0 : (i < 14 ? 1 : 2);
    pdclust::DissimilarityMatrix blocks(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i) {
        for (std::size_t j = i + 1; j < kPoints; ++j) blocks.set(i, j, truth[i] == truth[j] ? kBlockWithin : kBlockBetween);
    }
    const auto fuzzy = pdclust::fanny(blocks, 3);
    const double ari = pdclust::adjusted_rand_index(fuzzy.crisp, truth);
    const double sil = pdclust::silhouette(blocks, fuzzy.crisp).average;
    bool monotone = non_increasing(fuzzy.objective_trace);

    // objective traces on permutation-distribution matrices of random series
    for (int i = 0; i < 20; ++i) {
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<std::vector<double>> series(30);
        for (auto& s : series) {
            for (int t = 0; t < 200; ++t) s.push_back(g(rng));
        }
        const auto d = pdclust::distance_matrix(series, 3);
        monotone = monotone && non_increasing(pdclust::fanny(d, 3).objective_trace);
    }
    return {pam_optimal == kPlantedMatrices && monotone && ari == 1.0 && sil >= kMinBlockSilhouette,
            "PAM optimal on " + std::to_string(pam_optimal) + "/" + std::to_string(kPlantedMatrices) +
                ", FANNY monotone " + (monotone ? "yes" : "no") + ", ARI " + fmt(ari) + ", silhouette " + fmt(sil)};
}

Verdict anova() {
    const std::vector<std::vector<double>> hand = {{1, 2, 3}, {2, 3, 4}};
    const double f = stats::one_way_anova(hand).f;

    double worst_p = 0.0;
    const std::array<double, 4> fs = {0.3, 1.5, 4.0, 12.0};
    const std::array<std::pair<double, double>, 5> dfs = {{{1, 4}, {2, 10}, {3, 27}, {5, 60}, {9, 200}}};
    for (double fv : fs) {
        for (const auto& [d1, d2] : dfs) {
            worst_p = std::max(worst_p, std::abs(stats::f_distribution_sf(fv, d1, d2) - oracle::f_sf(fv, d1, d2)));
        }
    }

    std::mt19937_64 rng(606);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 50.0);
    double worst_f = 0.0;
    for (int i = 0; i < 200; ++i) {
        std::vector<std::vector<double>> groups(3);
        for (std::size_t j = 0; j < groups.size(); ++j) {
            for (int n = 0; n < 6; ++n) groups[j].push_back(g(rng) + 0.5 * static_cast<double>(j));
        }
        const double a = scale(rng);
        const double b = 100 * g(rng);
        auto moved = groups;
        for (auto& grp : moved) {
            for (auto& v : grp) v = a * v + b;
        }
        const double f0 = stats::one_way_anova(groups).f;
        const double f1 = stats::one_way_anova(moved).f;
        worst_f = std::max(worst_f, std::abs(f1 - f0) / std::max(1.0, std::abs(f0)));
    }
    return {std::abs(f - 1.5) <= kInvarianceTolerance && worst_p <= kQuadratureTolerance && worst_f <= kInvarianceTolerance,
            "F " + fmt(f) + ", max |p - quadrature| " + fmt(worst_p) + " over 20 points, max relative F drift " + fmt(worst_f)};
}

struct RegimeSummary {
    std::vector<double> distances;  // per team-match mean
    std::vector<double> rates;      // per player
    double mean(const std::vector<double>& v) const { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }
};

Verdict planted_ordering() {
    // professional, high and normal emulations
    const std::array<SkillTier, 3> tiers = {SkillTier::Professional, SkillTier::High, SkillTier::Normal};
    const std::array<double, 3> sigma = {6.0, 10.0, 14.0};
    const std::array<double, 3> rate = {6.0, 4.0, 2.0};
    const auto map = reference_zone_map();

    Stopwatch watch;
    int ordered = 0;
    int significant = 0;
    for (int rep = 0; rep < kRepetitions; ++rep) {
        std::array<RegimeSummary, 3> summary;
        for (std::size_t g = 0; g < tiers.size(); ++g) {
            const synth::RegimeParams params{sigma[g], rate[g], kRegimeMatchLength, 0};
            for (int i = 0; i < kMatchesPerRegime; ++i) {
                const auto id = static_cast<MatchId>(g * kMatchesPerRegime + static_cast<std::size_t>(i) + 1);
                const std::uint64_t seed = (static_cast<std::uint64_t>(rep) << 32) ^ (id * 0x9E3779B97F4A7C15ULL);
                const auto m = synth::generate_match(params, params, map, seed, {id, tiers[g], std::nullopt});
                const auto record = tickstream::to_match_record(tickstream::decode(m.stream), m.meta.tier, m.meta.winner,
                                                                m.meta.duration_s);
                for (const Team team : kTeams) {
                    const auto d = measures::distance_series(record, team).values;
                    summary[g].distances.push_back(std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size()));
                }
                for (const auto& track : record.tracks()) summary[g].rates.push_back(measures::zone_change_stats(track, map).rate_per_min);
            }
        }
        const auto& [pro, high, normal] = summary;
        const bool distance_up = pro.mean(pro.distances) < high.mean(high.distances) &&
                                 high.mean(high.distances) < normal.mean(normal.distances);
        const bool rate_down = pro.mean(pro.rates) > high.mean(high.rates) && high.mean(high.rates) > normal.mean(normal.rates);
        if (distance_up && rate_down) ++ordered;

        const std::vector<std::vector<double>> dg = {pro.distances, high.distances, normal.distances};
        const std::vector<std::vector<double>> rg = {pro.rates, high.rates, normal.rates};
        if (stats::one_way_anova(dg).p < kAnovaAlpha && stats::one_way_anova(rg).p < kAnovaAlpha) ++significant;
    }
    const double t = watch.seconds();
    return {ordered >= kRequiredOrdered && significant == kRepetitions && t < kEndToEndBudgetS,
            "professional < high < normal distance and > rate in " + std::to_string(ordered) + "/" +
                std::to_string(kRepetitions) + ", ANOVA p < 0.001 in " + std::to_string(significant) + "/" +
                std::to_string(kRepetitions) + ", " + fmt(t) + " s"};
}

double time_distance_matrix(const std::vector<std::vector<double>>& series) {
    Stopwatch watch;
    const auto d = pdclust::distance_matrix(series, 5);
    return d.size() == series.size() ? watch.seconds() : std::numeric_limits<double>::infinity();
}

Verdict performance() {
    std::mt19937_64 rng(707);
    std::normal_distribution<double> g(0.0, 1.0);
    auto make = [&](std::size_t len) {
        std::vector<std::vector<double>> out(kPerfSeries);
        for (auto& s : out) {
            double v = 0.0;
            for (std::size_t t = 0; t < len; ++t) s.push_back(v += g(rng));
        }
        return out;
    };
    const auto short_series = make(kPerfLength);
    const auto long_series = make(2 * kPerfLength);
    // best of interleaved runs, so load spikes hit both sizes alike
    double base = std::numeric_limits<double>::infinity();
    double doubled = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPerfRuns; ++i) {
        base = std::min(base, time_distance_matrix(short_series));
        doubled = std::min(doubled, time_distance_matrix(long_series));
    }
    const double ratio = doubled / base;
    return {base < kPerfBudgetS && ratio < kMaxDoublingRatio,
            "380 x 3000 at m=5 in " + fmt(base) + " s, doubling ratio " + fmt(ratio)};
}

Verdict config_echo() {
    const std::string expected =
        "min_dwell_s=5\nmoving_average_window_s=1\nk=3\nr=1.15\nm=5\ndelay=1\nseed=0\n"
        "phase_mid_start_s=900\nphase_late_start_s=1800\ntick_interval_ms=33\ngrid=128x128\nzone_labels=11\n";
    const std::string got = cli::RunConfig{}.snapshot();
    return {got == expected, got == expected ? "snapshot matches" : "snapshot differs:\n" + got};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"team distance oracle", team_distance_oracle},
        {"tickstream round trip", tickstream_round_trip},
        {"dwell rule", dwell_rule},
        {"permutation distribution", permutation_distribution},
        {"clustering oracles", clustering_oracles},
        {"anova", anova},
        {"planted ordering end to end", planted_ordering},
        {"distance matrix performance", performance},
        {"default configuration echo", config_echo},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    }
    return failed;
}
