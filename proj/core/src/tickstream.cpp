#include "mobatrack/tickstream.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

namespace mobatrack::tickstream {

namespace {

class ByteWriter {
public:
    explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v, 2); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void put_le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t> out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    bool at_end() const { return pos_ == bytes_.size(); }

    std::uint8_t u8(const char* field) { return static_cast<std::uint8_t>(get_le(1, field)); }
    std::uint16_t u16(const char* field) { return static_cast<std::uint16_t>(get_le(2, field)); }
    std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(get_le(4, field)); }
    std::uint64_t u64(const char* field) { return get_le(8, field); }
    float f32(const char* field) { return std::bit_cast<float>(u32(field)); }

private:
    std::uint64_t get_le(std::size_t n, const char* field) {
        if (bytes_.size() - pos_ < n) {
            throw DecodeError(DecodeError::Kind::Truncated, pos_,
                              std::string("truncated stream while reading ") + field);
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += n;
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::string entity_str(std::uint8_t id) { return std::to_string(static_cast<int>(id)); }

// Maps entity id -> slot index; -1 when absent.
using EntityIndex = std::array<int, 256>;

EntityIndex index_entities(const StreamHeader& header) {
    EntityIndex idx;
    idx.fill(-1);
    for (std::size_t i = 0; i < header.players.size(); ++i) idx[header.players[i].entity_id] = static_cast<int>(i);
    return idx;
}

void check_header(const StreamHeader& header) {
    if (header.players.size() != static_cast<std::size_t>(kPlayersPerMatch)) {
        throw EncodeError("header must list exactly 10 players, got " + std::to_string(header.players.size()));
    }
    if (header.tick_interval_ms == 0) throw EncodeError("tick interval must be positive");
    std::array<bool, 256> seen{};
    for (const auto& p : header.players) {
        if (seen[p.entity_id]) throw EncodeError("duplicate entity id " + entity_str(p.entity_id) + " in header");
        seen[p.entity_id] = true;
        if (p.team != Team::Radiant && p.team != Team::Dire) throw EncodeError("invalid team value in header");
    }
}

void check_frames(const StreamHeader& header, std::span<const Frame> frames) {
    if (frames.empty() || frames.front().tick != 0) throw EncodeError("missing keyframe at tick 0");
    const EntityIndex idx = index_entities(header);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const Frame& frame = frames[f];
        if (f > 0 && frame.tick <= frames[f - 1].tick) {
            throw EncodeError("frame ticks must strictly increase (tick " + std::to_string(frame.tick) + ")");
        }
        if (frame.updates.size() > std::numeric_limits<std::uint16_t>::max()) {
            throw EncodeError("too many updates in one frame");
        }
        std::array<bool, 256> seen{};
        for (const auto& u : frame.updates) {
            if (idx[u.entity_id] < 0) throw EncodeError("unknown entity id " + entity_str(u.entity_id));
            if (seen[u.entity_id]) {
                throw EncodeError("duplicate entity " + entity_str(u.entity_id) + " in frame at tick " +
                                  std::to_string(frame.tick));
            }
            seen[u.entity_id] = true;
            if (!GridCell::in_range(u.cell_x) || !GridCell::in_range(u.cell_y)) {
                throw EncodeError("cell (" + std::to_string(u.cell_x) + "," + std::to_string(u.cell_y) +
                                  ") out of range for entity " + entity_str(u.entity_id));
            }
            if (!std::isfinite(u.offset.vx) || !std::isfinite(u.offset.vy)) {
                throw EncodeError("non-finite sub-cell offset for entity " + entity_str(u.entity_id));
            }
        }
        if (f == 0 && frame.updates.size() != header.players.size()) {
            throw EncodeError("keyframe must carry all 10 entities");
        }
    }
}

}  // namespace

bool operator==(const EntityUpdate& a, const EntityUpdate& b) {
    return a.entity_id == b.entity_id && a.cell_x == b.cell_x && a.cell_y == b.cell_y &&
           std::bit_cast<std::uint32_t>(a.offset.vx) == std::bit_cast<std::uint32_t>(b.offset.vx) &&
           std::bit_cast<std::uint32_t>(a.offset.vy) == std::bit_cast<std::uint32_t>(b.offset.vy);
}

DecodeError::DecodeError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at byte offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

std::vector<std::uint8_t> encode(const StreamHeader& header, std::span<const Frame> frames) {
    check_header(header);
    check_frames(header, frames);

    std::size_t size = kHeaderSize;
    for (const auto& f : frames) size += kFrameHeaderSize + f.updates.size() * kUpdateSize;

    ByteWriter w(size);
    for (auto b : kMagic) w.u8(b);
    w.u16(kVersion);
    w.u64(header.match_id);
    w.u16(header.tick_interval_ms);
    w.u8(static_cast<std::uint8_t>(header.players.size()));
    for (const auto& p : header.players) {
        w.u8(p.entity_id);
        w.u8(static_cast<std::uint8_t>(p.team));
        w.u32(p.player_id);
    }
    for (const auto& f : frames) {
        w.u32(f.tick);
        w.u16(static_cast<std::uint16_t>(f.updates.size()));
        for (const auto& u : f.updates) {
            w.u8(u.entity_id);
            w.u8(u.cell_x);
            w.u8(u.cell_y);
            w.f32(u.offset.vx);
            w.f32(u.offset.vy);
        }
    }
    return w.take();
}

DecodedStream decode(std::span<const std::uint8_t> bytes) {
    using Kind = DecodeError::Kind;
    ByteReader r(bytes);
    DecodedStream out;

    for (auto expected : kMagic) {
        const std::size_t at = r.offset();
        if (r.u8("magic") != expected) throw DecodeError(Kind::BadMagic, at, "bad magic (expected 'DTL2')");
    }
    {
        const std::size_t at = r.offset();
        const auto version = r.u16("version");
        if (version != kVersion) {
            throw DecodeError(Kind::UnsupportedVersion, at, "unsupported version " + std::to_string(version));
        }
    }
    out.header.match_id = r.u64("match_id");
    {
        const std::size_t at = r.offset();
        out.header.tick_interval_ms = r.u16("tick_interval_ms");
        if (out.header.tick_interval_ms == 0) throw DecodeError(Kind::BadHeader, at, "zero tick interval");
    }
    {
        const std::size_t at = r.offset();
        const auto count = r.u8("player_count");
        if (count != kPlayersPerMatch) {
            throw DecodeError(Kind::BadHeader, at, "player count " + std::to_string(count) + " (expected 10)");
        }
    }
    std::array<bool, 256> in_header{};
    for (int i = 0; i < kPlayersPerMatch; ++i) {
        const std::size_t at = r.offset();
        PlayerSlot slot;
        slot.entity_id = r.u8("entity_id");
        const auto team = r.u8("team");
        slot.player_id = r.u32("player_id");
        if (in_header[slot.entity_id]) {
            throw DecodeError(Kind::DuplicateEntity, at, "duplicate entity id " + entity_str(slot.entity_id) + " in header");
        }
        if (team > 1) throw DecodeError(Kind::BadHeader, at + 1, "invalid team byte " + std::to_string(team));
        in_header[slot.entity_id] = true;
        slot.team = static_cast<Team>(team);
        out.header.players.push_back(slot);
    }

    while (!r.at_end()) {
        const std::size_t frame_at = r.offset();
        Frame frame;
        frame.tick = r.u32("frame tick");
        if (out.frames.empty() && frame.tick != 0) {
            throw DecodeError(Kind::MissingKeyframe, frame_at, "first frame is not a tick-0 keyframe");
        }
        if (!out.frames.empty() && frame.tick <= out.frames.back().tick) {
            throw DecodeError(Kind::NonIncreasingTick, frame_at,
                              "non-increasing tick " + std::to_string(frame.tick));
        }
        const auto count = r.u16("update_count");
        frame.updates.reserve(count);
        std::array<bool, 256> seen{};
        for (std::uint16_t i = 0; i < count; ++i) {
            const std::size_t at = r.offset();
            EntityUpdate u;
            u.entity_id = r.u8("update entity_id");
            u.cell_x = r.u8("update cell_x");
            u.cell_y = r.u8("update cell_y");
            u.offset.vx = r.f32("update vx");
            u.offset.vy = r.f32("update vy");
            if (!in_header[u.entity_id]) {
                throw DecodeError(Kind::UnknownEntity, at, "unknown entity id " + entity_str(u.entity_id));
            }
            if (seen[u.entity_id]) {
                throw DecodeError(Kind::DuplicateEntity, at, "duplicate entity " + entity_str(u.entity_id) + " in frame");
            }
            seen[u.entity_id] = true;
            if (!GridCell::in_range(u.cell_x) || !GridCell::in_range(u.cell_y)) {
                throw DecodeError(Kind::CellOutOfRange, at + 1,
                                  "cell (" + std::to_string(u.cell_x) + "," + std::to_string(u.cell_y) + ") out of range");
            }
            if (!std::isfinite(u.offset.vx) || !std::isfinite(u.offset.vy)) {
                throw DecodeError(Kind::NonFiniteOffset, at + 3, "non-finite sub-cell offset");
            }
            frame.updates.push_back(u);
        }
        if (out.frames.empty() && frame.updates.size() != static_cast<std::size_t>(kPlayersPerMatch)) {
            throw DecodeError(Kind::MissingKeyframe, frame_at, "keyframe does not carry all 10 entities");
        }
        out.frames.push_back(std::move(frame));
    }
    if (out.frames.empty()) throw DecodeError(Kind::MissingKeyframe, r.offset(), "stream has no frames");
    return out;
}

Seconds tick_to_second(std::uint32_t tick, std::uint16_t tick_interval_ms) {
    const auto ms = static_cast<std::uint64_t>(tick) * tick_interval_ms;
    return static_cast<Seconds>((ms + 500) / 1000);
}

std::uint32_t first_tick_of_second(Seconds second, std::uint16_t tick_interval_ms) {
    if (second < 0) throw std::invalid_argument("negative second");
    if (tick_interval_ms == 0 || tick_interval_ms > 1000) {
        throw std::invalid_argument("tick interval must lie in [1, 1000] ms");
    }
    if (second == 0) return 0;
    const auto need = static_cast<std::uint64_t>(second) * 1000 - 500;
    const auto tick = (need + tick_interval_ms - 1) / tick_interval_ms;
    if (tick > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("tick overflows u32");
    return static_cast<std::uint32_t>(tick);
}

Seconds stream_duration(const DecodedStream& stream) {
    if (stream.frames.empty()) return 0;
    return tick_to_second(stream.frames.back().tick, stream.header.tick_interval_ms);
}

std::vector<PlayerTrack> resample_to_tracks(const StreamHeader& header, std::span<const Frame> frames,
                                            Seconds duration_s) {
    if (duration_s < 0) throw std::invalid_argument("negative duration");
    const EntityIndex idx = index_entities(header);
    const std::size_t n = header.players.size();
    const auto len = static_cast<std::size_t>(duration_s) + 1;

    std::vector<std::vector<GridCell>> cells(n, std::vector<GridCell>(len));
    std::vector<bool> has_initial(n, false);
    // Latest known cell per slot while sweeping forward.
    std::vector<GridCell> current(n);

    std::size_t f = 0;
    for (std::size_t s = 0; s < len; ++s) {
        while (f < frames.size() &&
               tick_to_second(frames[f].tick, header.tick_interval_ms) <= static_cast<Seconds>(s)) {
            for (const auto& u : frames[f].updates) {
                const int slot = idx[u.entity_id];
                if (slot < 0) throw std::invalid_argument("update for unknown entity " + entity_str(u.entity_id));
                current[static_cast<std::size_t>(slot)] = u.cell();
                if (s == 0) has_initial[static_cast<std::size_t>(slot)] = true;
            }
            ++f;
        }
        if (s == 0) {
            for (std::size_t p = 0; p < n; ++p) {
                if (!has_initial[p]) {
                    throw std::invalid_argument("player " + std::to_string(header.players[p].player_id) +
                                                " has no position at second 0");
                }
            }
        }
        for (std::size_t p = 0; p < n; ++p) cells[p][s] = current[p];
    }

    std::vector<PlayerTrack> tracks;
    tracks.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        tracks.emplace_back(header.players[p].player_id, header.players[p].team, std::move(cells[p]));
    }
    return tracks;
}

MatchRecord to_match_record(const DecodedStream& stream, SkillTier tier, Team winner,
                            std::optional<Seconds> duration_s) {
    const Seconds duration = duration_s.value_or(stream_duration(stream));
    MatchMeta meta{stream.header.match_id, tier, winner, duration};
    return MatchRecord(meta, resample_to_tracks(stream.header, stream.frames, duration));
}

}  // namespace mobatrack::tickstream
