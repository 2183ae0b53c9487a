#include "mobatrack/core.hpp"

#include <algorithm>

namespace mobatrack {

std::string_view to_string(Team t) {
    return t == Team::Radiant ? "Radiant" : "Dire";
}

Team parse_team(std::string_view s) {
    if (s == "Radiant" || s == "radiant" || s == "0") return Team::Radiant;
    if (s == "Dire" || s == "dire" || s == "1") return Team::Dire;
    throw FormatError("unknown team '" + std::string(s) + "'");
}

std::optional<MmrRange> mmr_range(SkillTier tier) {
    switch (tier) {
        case SkillTier::Normal: return MmrRange{2000, 3000};
        case SkillTier::High: return MmrRange{3000, 4000};
        case SkillTier::VeryHigh: return MmrRange{4000, std::nullopt};
        case SkillTier::Professional: return std::nullopt;
    }
    return std::nullopt;
}

SkillTier tier_of_mmr(int mmr) {
    if (mmr < 2000) {
        throw std::invalid_argument("MMR " + std::to_string(mmr) + " below the lowest rated tier (2000)");
    }
    if (mmr < 3000) return SkillTier::Normal;
    if (mmr < 4000) return SkillTier::High;
    return SkillTier::VeryHigh;
}

std::string_view to_string(SkillTier t) {
    switch (t) {
        case SkillTier::Normal: return "Normal";
        case SkillTier::High: return "High";
        case SkillTier::VeryHigh: return "VeryHigh";
        case SkillTier::Professional: return "Professional";
    }
    return "?";
}

SkillTier parse_tier(std::string_view s) {
    for (SkillTier t : kSkillTiers) {
        if (s == to_string(t)) return t;
    }
    throw FormatError("unknown skill tier '" + std::string(s) + "'");
}

PhaseWindow phase_window(Phase p) {
    switch (p) {
        case Phase::Early: return {0, kMidPhaseStart};
        case Phase::Mid: return {kMidPhaseStart, kLatePhaseStart};
        case Phase::Late: return {kLatePhaseStart, std::nullopt};
    }
    return {};
}

Phase phase_of(Seconds t) {
    if (t < 0) throw std::invalid_argument("negative match time " + std::to_string(t));
    if (t < kMidPhaseStart) return Phase::Early;
    if (t < kLatePhaseStart) return Phase::Mid;
    return Phase::Late;
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Early: return "early";
        case Phase::Mid: return "mid";
        case Phase::Late: return "late";
    }
    return "?";
}

Phase parse_phase(std::string_view s) {
    for (Phase p : kPhases) {
        if (s == to_string(p)) return p;
    }
    throw FormatError("unknown phase '" + std::string(s) + "'");
}

PlayerTrack::PlayerTrack(PlayerId player_id, Team team, std::vector<GridCell> cells)
    : player_id_(player_id), team_(team), cells_(std::move(cells)) {
    if (cells_.empty()) throw std::invalid_argument("player track must hold at least one sample");
}

MatchRecord::MatchRecord(MatchMeta meta, std::vector<PlayerTrack> tracks)
    : meta_(meta), tracks_(std::move(tracks)) {
    if (meta_.duration_s < 0) throw std::invalid_argument("negative match duration");
    if (tracks_.size() != static_cast<std::size_t>(kPlayersPerMatch)) {
        throw std::invalid_argument("match " + std::to_string(meta_.match_id) + " has " +
                                    std::to_string(tracks_.size()) + " tracks, expected 10");
    }
    const auto per_team = std::count_if(tracks_.begin(), tracks_.end(),
                                        [](const PlayerTrack& t) { return t.team() == Team::Radiant; });
    if (per_team != kPlayersPerTeam) {
        throw std::invalid_argument("match " + std::to_string(meta_.match_id) +
                                    " does not have 5 players per team");
    }
    const auto expected = static_cast<std::size_t>(meta_.duration_s) + 1;
    for (const auto& t : tracks_) {
        if (t.size() != expected) {
            throw std::invalid_argument("track of player " + std::to_string(t.player_id()) + " has " +
                                        std::to_string(t.size()) + " samples, expected " +
                                        std::to_string(expected));
        }
    }
}

std::vector<const PlayerTrack*> MatchRecord::team_tracks(Team team) const {
    std::vector<const PlayerTrack*> out;
    out.reserve(kPlayersPerTeam);
    for (const auto& t : tracks_) {
        if (t.team() == team) out.push_back(&t);
    }
    return out;
}

}  // namespace mobatrack
