#pragma once

// DTL2: a compact little-endian tick stream holding sparse per-entity
// position updates. Layout:
//
//   header   magic "DTL2" | u16 version (=1) | u64 match_id |
//            u16 tick_interval_ms | u8 player_count (=10) |
//            player_count x (u8 entity_id | u8 team | u32 player_id)
//   frame*   u32 tick | u16 update_count |
//            update_count x (u8 entity_id | u8 cell_x | u8 cell_y | f32 vx | f32 vy)
//
// Frames run to the end of the buffer. The first frame is a keyframe at
// tick 0 carrying every entity; later frames list only entities that moved.

#include "mobatrack/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobatrack::tickstream {

inline constexpr std::array<std::uint8_t, 4> kMagic = {'D', 'T', 'L', '2'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kPlayerSlotSize = 6;
inline constexpr std::size_t kHeaderSize = 4 + 2 + 8 + 2 + 1 + kPlayersPerMatch * kPlayerSlotSize;
inline constexpr std::size_t kFrameHeaderSize = 4 + 2;
inline constexpr std::size_t kUpdateSize = 3 + 4 + 4;

struct PlayerSlot {
    std::uint8_t entity_id = 0;
    Team team = Team::Radiant;
    PlayerId player_id = 0;

    friend bool operator==(const PlayerSlot&, const PlayerSlot&) = default;
};

struct StreamHeader {
    MatchId match_id = 0;
    std::uint16_t tick_interval_ms = kDefaultTickIntervalMs;
    std::vector<PlayerSlot> players;

    friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

struct EntityUpdate {
    std::uint8_t entity_id = 0;
    std::uint8_t cell_x = 0;
    std::uint8_t cell_y = 0;
    SubCellOffset offset;

    GridCell cell() const { return GridCell(cell_x, cell_y); }
};

// Offsets compare by bit pattern so that round trips are checked bit-exactly.
bool operator==(const EntityUpdate& a, const EntityUpdate& b);

struct Frame {
    std::uint32_t tick = 0;
    std::vector<EntityUpdate> updates;

    friend bool operator==(const Frame&, const Frame&) = default;
};

struct DecodedStream {
    StreamHeader header;
    std::vector<Frame> frames;

    friend bool operator==(const DecodedStream&, const DecodedStream&) = default;
};

/// Rejected input to encode().
class EncodeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rejected bytes in decode(); carries the offset where decoding stopped.
class DecodeError : public std::runtime_error {
public:
    enum class Kind {
        BadMagic,
        UnsupportedVersion,
        BadHeader,
        Truncated,
        UnknownEntity,
        DuplicateEntity,
        CellOutOfRange,
        NonFiniteOffset,
        NonIncreasingTick,
        MissingKeyframe,
    };

    DecodeError(Kind kind, std::size_t offset, const std::string& what);

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

std::vector<std::uint8_t> encode(const StreamHeader& header, std::span<const Frame> frames);

DecodedStream decode(std::span<const std::uint8_t> bytes);

/// Tick time rounded half-up to the nearest whole second.
Seconds tick_to_second(std::uint32_t tick, std::uint16_t tick_interval_ms);

/// Inverse used by writers: the smallest tick that standardizes to `second`.
std::uint32_t first_tick_of_second(Seconds second, std::uint16_t tick_interval_ms);

/// Match length implied by the final frame.
Seconds stream_duration(const DecodedStream& stream);

/// Replays the frames into ten 1 Hz tracks covering [0, duration_s], in
/// header order. Each second holds the most recent update whose
/// standardized second is <= that second; later ticks win within a second.
std::vector<PlayerTrack> resample_to_tracks(const StreamHeader& header, std::span<const Frame> frames,
                                            Seconds duration_s);

/// resample_to_tracks plus metadata into a validated MatchRecord.
MatchRecord to_match_record(const DecodedStream& stream, SkillTier tier, Team winner,
                            std::optional<Seconds> duration_s = std::nullopt);

}  // namespace mobatrack::tickstream
