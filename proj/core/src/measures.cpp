#include "mobatrack/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mobatrack::measures {

namespace {

// sqrt(dx^2 + dy^2) for every integer offset on the grid; squared distances
// top out at 2 * 127^2.
constexpr int kMaxSquaredDistance = 2 * kMaxCellIndex * kMaxCellIndex;

const std::vector<double>& sqrt_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kMaxSquaredDistance + 1);
        for (int i = 0; i <= kMaxSquaredDistance; ++i) t[i] = std::sqrt(static_cast<double>(i));
        return t;
    }();
    return table;
}

}  // namespace

std::vector<ZoneLabel> zone_sequence(const PlayerTrack& track, const ZoneMap& map) {
    std::vector<ZoneLabel> out;
    out.reserve(track.size());
    for (const auto c : track.cells()) out.push_back(map.zone_of(c));
    return out;
}

std::vector<ZoneVisit> dwell_filter(std::span<const ZoneLabel> zones, Seconds min_dwell_s) {
    std::vector<ZoneVisit> visits;
    std::size_t i = 0;
    while (i < zones.size()) {
        std::size_t j = i + 1;
        while (j < zones.size() && zones[j] == zones[i]) ++j;
        const auto run = static_cast<Seconds>(j - i);
        if (run >= min_dwell_s) {
            if (!visits.empty() && visits.back().zone == zones[i]) {
                // Merged visits span the dropped gap, so the dwell becomes the
                // sum of the surviving runs only.
                visits.back().dwell_s += run;
            } else {
                visits.push_back({zones[i], static_cast<Seconds>(i), run});
            }
        }
        i = j;
    }
    return visits;
}

ZoneChangeStats zone_change_stats(PlayerId player_id, std::span<const ZoneVisit> visits, Seconds duration_s) {
    if (duration_s <= 0) throw std::invalid_argument("zone change rate needs a positive duration");
    ZoneChangeStats s;
    s.player_id = player_id;
    s.changes = change_count(visits);
    s.duration_s = duration_s;
    s.rate_per_min = static_cast<double>(s.changes) * 60.0 / static_cast<double>(duration_s);
    return s;
}

ZoneChangeStats zone_change_stats(const PlayerTrack& track, const ZoneMap& map, Seconds min_dwell_s) {
    const auto zones = zone_sequence(track, map);
    const auto visits = dwell_filter(zones, min_dwell_s);
    return zone_change_stats(track.player_id(), visits, static_cast<Seconds>(track.size()));
}

double team_distance(std::span<const GridCell> positions) {
    const std::size_t n = positions.size();
    if (n < 2) throw std::invalid_argument("team distance needs at least two positions");
    const auto& root = sqrt_table();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int dx = positions[i].x() - positions[j].x();
            const int dy = positions[i].y() - positions[j].y();
            sum += root[static_cast<std::size_t>(dx * dx + dy * dy)];
        }
    }
    return 2.0 * sum / static_cast<double>(n * (n - 1));
}

DistanceSeries distance_series(const MatchRecord& match, Team team) {
    const auto tracks = match.team_tracks(team);
    DistanceSeries out;
    out.match_id = match.match_id();
    out.team = team;
    const auto len = static_cast<std::size_t>(match.duration_s()) + 1;
    out.values.resize(len);
    std::array<GridCell, kPlayersPerTeam> at{};
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t p = 0; p < tracks.size(); ++p) at[p] = tracks[p]->cells()[t];
        out.values[t] = team_distance(std::span<const GridCell>(at.data(), tracks.size()));
    }
    return out;
}

std::vector<double> moving_average(std::span<const double> series, Seconds window_s) {
    if (window_s < 1) throw std::invalid_argument("moving-average window must be at least 1 second");
    const auto w = static_cast<std::size_t>(window_s);
    std::vector<double> out(series.size());
    if (w == 1) {
        std::copy(series.begin(), series.end(), out.begin());
        return out;
    }
    for (std::size_t t = 0; t < series.size(); ++t) {
        const std::size_t first = t + 1 >= w ? t + 1 - w : 0;
        double sum = 0.0;
        for (std::size_t i = first; i <= t; ++i) sum += series[i];
        out[t] = sum / static_cast<double>(t + 1 - first);
    }
    return out;
}

CategoryAggregate aggregate_by_category(std::span<const LabeledSeries> series, SkillTier tier, bool win,
                                        Phase phase) {
    std::vector<std::span<const double>> members;
    for (const auto& s : series) {
        if (s.tier == tier && s.win == win) members.push_back(s.values);
    }
    if (members.empty()) {
        throw std::invalid_argument("no series in category " + std::string(to_string(tier)) + "/" +
                                    (win ? "win" : "loss"));
    }

    CategoryAggregate agg;
    agg.tier = tier;
    agg.win = win;
    agg.phase = phase;

    std::size_t longest = 0;
    for (const auto& m : members) longest = std::max(longest, m.size());
    const auto window = phase_window(phase);
    const auto begin = static_cast<std::size_t>(window.begin);
    const std::size_t end = window.end ? std::min(longest, static_cast<std::size_t>(*window.end)) : longest;

    for (std::size_t t = begin; t < end; ++t) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& m : members) {
            if (t < m.size()) {
                sum += m[t];
                ++n;
            }
        }
        agg.points.push_back({static_cast<Seconds>(t), sum / static_cast<double>(n), n});
    }
    return agg;
}

}  // namespace mobatrack::measures
