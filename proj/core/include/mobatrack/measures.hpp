#pragma once

// Behavioural measures over decoded matches: dwell-filtered zone changes,
// per-second intra-team distance, moving averages and per-category
// aggregation across matches.

#include "mobatrack/core.hpp"
#include "mobatrack/zonemap.hpp"

#include <span>
#include <vector>

namespace mobatrack::measures {

inline constexpr Seconds kDefaultMinDwell = 5;

struct ZoneVisit {
    ZoneLabel zone = ZoneLabel::Void;
    Seconds start_s = 0;
    Seconds dwell_s = 0;

    friend bool operator==(const ZoneVisit&, const ZoneVisit&) = default;
};

struct ZoneChangeStats {
    PlayerId player_id = 0;
    std::size_t changes = 0;
    Seconds duration_s = 0;
    double rate_per_min = 0.0;
};

/// Zone label of the player at every second.
std::vector<ZoneLabel> zone_sequence(const PlayerTrack& track, const ZoneMap& map);

/// Run-length encodes `zones`, drops runs shorter than `min_dwell_s`, then
/// merges neighbouring survivors that share a zone. Dropped time is not
/// given to anyone.
std::vector<ZoneVisit> dwell_filter(std::span<const ZoneLabel> zones, Seconds min_dwell_s = kDefaultMinDwell);

inline std::size_t change_count(std::span<const ZoneVisit> visits) {
    return visits.empty() ? 0 : visits.size() - 1;
}

/// changes * 60 / duration_s; throws std::invalid_argument when duration_s <= 0.
ZoneChangeStats zone_change_stats(PlayerId player_id, std::span<const ZoneVisit> visits, Seconds duration_s);

/// Observation time is the number of 1 Hz samples in the track.
ZoneChangeStats zone_change_stats(const PlayerTrack& track, const ZoneMap& map,
                                  Seconds min_dwell_s = kDefaultMinDwell);

/// Mean Euclidean distance over all unordered pairs of positions.
/// Requires at least two positions.
double team_distance(std::span<const GridCell> positions);

struct DistanceSeries {
    MatchId match_id = 0;
    Team team = Team::Radiant;
    std::vector<double> values;  // D(t) for t = 0..duration_s
};

DistanceSeries distance_series(const MatchRecord& match, Team team);

/// Trailing mean over min(window_s, t + 1) samples ending at t.
std::vector<double> moving_average(std::span<const double> series, Seconds window_s = 1);

/// One series tagged with the category it belongs to.
struct LabeledSeries {
    SkillTier tier = SkillTier::Normal;
    bool win = false;
    std::span<const double> values;
};

struct AggregatePoint {
    Seconds t = 0;
    double mean = 0.0;
    std::size_t n_matches = 0;
};

struct CategoryAggregate {
    SkillTier tier = SkillTier::Normal;
    bool win = false;
    Phase phase = Phase::Early;
    std::vector<AggregatePoint> points;
};

/// Per-second mean of every series in (tier, win) over the phase window.
/// At each second only series that reach it contribute; points stop where
/// no series remains. Throws std::invalid_argument if the category is empty.
CategoryAggregate aggregate_by_category(std::span<const LabeledSeries> series, SkillTier tier, bool win,
                                        Phase phase);

}  // namespace mobatrack::measures
