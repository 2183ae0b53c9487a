#pragma once

// Seeded synthetic matches with planted team behaviour, used as an
// end-to-end oracle for the measures.
//
// Each team follows an anchor that jumps between waypoint zones (the three
// lanes and the jungle). Jumps form a renewal process with a 5 s dead time
// and mean gap 60 / switch_rate seconds, so every visit survives the dwell
// filter and each player changes zone switch_rate times per minute on
// average. At every jump the five players are placed around the anchor with
// Gaussian offsets of scale spread_sigma, resampled until they land in the
// anchor's zone.

#include "mobatrack/core.hpp"
#include "mobatrack/zonemap.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mobatrack::synth {

inline constexpr Seconds kDeadTime = 5;
// Above this the dead time alone would exceed the mean gap.
inline constexpr double kMaxSwitchRate = 60.0 / static_cast<double>(kDeadTime);

struct RegimeParams {
    double spread_sigma = 10.0;  // cells
    double switch_rate = 4.0;    // zone changes per player per minute
    Seconds match_len_s = 900;
    std::uint64_t seed = 0;
};

/// Planted regime for a tier: lower tiers spread wider and switch less.
RegimeParams regime_for_tier(SkillTier tier, Seconds match_len_s);

struct MatchOptions {
    MatchId match_id = 1;
    SkillTier tier = SkillTier::Normal;
    std::optional<Team> winner;  // drawn from the seed when empty
};

struct SynthMatch {
    std::vector<std::uint8_t> stream;  // DTL2 bytes
    MatchMeta meta;
};

/// Throws std::invalid_argument for non-positive parameters, switch rates
/// above 12 per minute, or differing match lengths between the teams.
SynthMatch generate_match(const RegimeParams& radiant, const RegimeParams& dire, const ZoneMap& map,
                          std::uint64_t seed, const MatchOptions& options = {});

}  // namespace mobatrack::synth
