#pragma once

// Domain types shared by every mobatrack module: grid cells, teams, skill
// tiers, match phases, per-player tracks and whole-match records.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobatrack {

using Seconds = std::int64_t;
using PlayerId = std::uint32_t;
using MatchId = std::uint64_t;

inline constexpr int kGridSize = 128;
inline constexpr int kMaxCellIndex = kGridSize - 1;
inline constexpr int kPlayersPerTeam = 5;
inline constexpr int kPlayersPerMatch = 2 * kPlayersPerTeam;
inline constexpr std::uint16_t kDefaultTickIntervalMs = 33;

// Source engines report cells relative to the map centre.
inline constexpr int kSignedCellShift = 64;

/// Raised when input data is malformed (file formats, CSV rows, legends).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One cell of the 128x128 map grid. Both indices lie in [0, 127].
class GridCell {
public:
    constexpr GridCell() = default;
    constexpr GridCell(int x, int y) : x_(checked(x)), y_(checked(y)) {}

    /// Converts a centre-origin coordinate pair (range [-64, 63]).
    static constexpr GridCell from_signed(int sx, int sy) {
        return GridCell(sx + kSignedCellShift, sy + kSignedCellShift);
    }

    static constexpr bool in_range(int v) { return v >= 0 && v <= kMaxCellIndex; }

    constexpr int x() const { return x_; }
    constexpr int y() const { return y_; }

    /// Row-major index x * 128 + y, used by dense grids.
    constexpr std::size_t index() const {
        return static_cast<std::size_t>(x_) * kGridSize + static_cast<std::size_t>(y_);
    }

    friend constexpr bool operator==(GridCell, GridCell) = default;

private:
    static constexpr std::uint8_t checked(int v) {
        if (!in_range(v)) {
            throw std::out_of_range("grid cell index " + std::to_string(v) + " outside [0,127]");
        }
        return static_cast<std::uint8_t>(v);
    }

    std::uint8_t x_ = 0;
    std::uint8_t y_ = 0;
};

/// Fractional position inside a cell. Decoded and preserved, never measured.
struct SubCellOffset {
    float vx = 0.0F;
    float vy = 0.0F;
};

enum class Team : std::uint8_t { Radiant = 0, Dire = 1 };

inline constexpr std::array<Team, 2> kTeams = {Team::Radiant, Team::Dire};

constexpr Team opponent(Team t) { return t == Team::Radiant ? Team::Dire : Team::Radiant; }

std::string_view to_string(Team t);
Team parse_team(std::string_view s);

enum class SkillTier : std::uint8_t { Normal, High, VeryHigh, Professional };

inline constexpr std::array<SkillTier, 4> kSkillTiers = {
    SkillTier::Normal, SkillTier::High, SkillTier::VeryHigh, SkillTier::Professional};

/// Half-open MMR interval; `upper` is empty for the open-ended top bracket.
struct MmrRange {
    int lower = 0;
    std::optional<int> upper;

    constexpr bool contains(int mmr) const { return mmr >= lower && (!upper || mmr < *upper); }
};

/// MMR interval of a rated tier; Professional has none.
std::optional<MmrRange> mmr_range(SkillTier tier);

/// Maps a matchmaking rating to its tier. Ratings below 2000 are rejected.
/// Professional is never returned: it comes from tournament provenance.
SkillTier tier_of_mmr(int mmr);

std::string_view to_string(SkillTier t);
SkillTier parse_tier(std::string_view s);

enum class Phase : std::uint8_t { Early, Mid, Late };

inline constexpr std::array<Phase, 3> kPhases = {Phase::Early, Phase::Mid, Phase::Late};
inline constexpr Seconds kMidPhaseStart = 900;
inline constexpr Seconds kLatePhaseStart = 1800;

/// Half-open window [begin, end) of a phase; Late has no end.
struct PhaseWindow {
    Seconds begin = 0;
    std::optional<Seconds> end;
};

PhaseWindow phase_window(Phase p);

/// Phase containing match time `t`; throws std::invalid_argument for t < 0.
Phase phase_of(Seconds t);

std::string_view to_string(Phase p);
Phase parse_phase(std::string_view s);

/// A player's grid position at 1 Hz. Sample i is the position at t = i seconds.
class PlayerTrack {
public:
    PlayerTrack(PlayerId player_id, Team team, std::vector<GridCell> cells);

    PlayerId player_id() const { return player_id_; }
    Team team() const { return team_; }
    std::span<const GridCell> cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    GridCell at(Seconds t) const { return cells_.at(static_cast<std::size_t>(t)); }

    friend bool operator==(const PlayerTrack&, const PlayerTrack&) = default;

private:
    PlayerId player_id_;
    Team team_;
    std::vector<GridCell> cells_;
};

/// Match metadata carried alongside trajectories.
struct MatchMeta {
    MatchId match_id = 0;
    SkillTier tier = SkillTier::Normal;
    Team winner = Team::Radiant;
    Seconds duration_s = 0;

    friend bool operator==(const MatchMeta&, const MatchMeta&) = default;
};

/// A complete match: metadata plus ten tracks, five per team, each holding
/// duration_s + 1 samples. Validated on construction, immutable afterwards.
class MatchRecord {
public:
    MatchRecord(MatchMeta meta, std::vector<PlayerTrack> tracks);

    const MatchMeta& meta() const { return meta_; }
    MatchId match_id() const { return meta_.match_id; }
    SkillTier tier() const { return meta_.tier; }
    Team winner() const { return meta_.winner; }
    Seconds duration_s() const { return meta_.duration_s; }
    std::span<const PlayerTrack> tracks() const { return tracks_; }

    /// The five tracks of one team, in stored order.
    std::vector<const PlayerTrack*> team_tracks(Team team) const;

    bool won(Team team) const { return meta_.winner == team; }

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;

private:
    MatchMeta meta_;
    std::vector<PlayerTrack> tracks_;
};

}  // namespace mobatrack
