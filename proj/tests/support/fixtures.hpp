#pragma once

#include "mobatrack/core.hpp"
#include "mobatrack/tickstream.hpp"
#include "mobatrack/zonemap.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mobatrack::testing {

inline PlayerId player_id_of(int slot) { return static_cast<PlayerId>(1000 + slot); }

/// Match from ten per-player cell sequences; slots 0..4 are Radiant.
inline MatchRecord make_match(MatchId id, SkillTier tier, Team winner, const std::vector<std::vector<GridCell>>& cells) {
    std::vector<PlayerTrack> tracks;
    for (int slot = 0; slot < kPlayersPerMatch; ++slot) {
        tracks.emplace_back(player_id_of(slot), slot < kPlayersPerTeam ? Team::Radiant : Team::Dire, cells[slot]);
    }
    const auto duration = static_cast<Seconds>(cells.front().size()) - 1;
    return MatchRecord({id, tier, winner, duration}, std::move(tracks));
}

/// Every player frozen on its own cell for duration_s + 1 samples.
inline MatchRecord frozen_match(MatchId id, Seconds duration_s, const std::vector<GridCell>& cells,
                                SkillTier tier = SkillTier::Normal, Team winner = Team::Radiant) {
    std::vector<std::vector<GridCell>> tracks;
    for (const auto& c : cells) tracks.emplace_back(static_cast<std::size_t>(duration_s + 1), c);
    return make_match(id, tier, winner, tracks);
}

inline tickstream::StreamHeader standard_header(MatchId id, std::uint16_t interval = kDefaultTickIntervalMs) {
    tickstream::StreamHeader h;
    h.match_id = id;
    h.tick_interval_ms = interval;
    for (int slot = 0; slot < kPlayersPerMatch; ++slot) {
        h.players.push_back({static_cast<std::uint8_t>(slot + 1), slot < kPlayersPerTeam ? Team::Radiant : Team::Dire,
                             player_id_of(slot)});
    }
    return h;
}

/// Random valid stream: shuffled entity ids, keyframe at tick 0, sparse
/// frames with strictly increasing ticks and arbitrary finite offsets.
inline tickstream::DecodedStream random_stream(std::mt19937_64& rng, int max_frames = 40) {
    tickstream::DecodedStream s;
    s.header.match_id = rng();
    s.header.tick_interval_ms = static_cast<std::uint16_t>(std::uniform_int_distribution<int>(1, 100)(rng));
    std::vector<std::uint8_t> ids(256);
    for (int i = 0; i < 256; ++i) ids[i] = static_cast<std::uint8_t>(i);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (int slot = 0; slot < kPlayersPerMatch; ++slot) {
        s.header.players.push_back({ids[slot], slot % 2 == 0 ? Team::Radiant : Team::Dire, static_cast<PlayerId>(rng())});
    }
    if (std::count_if(s.header.players.begin(), s.header.players.end(),
                      [](const auto& p) { return p.team == Team::Radiant; }) != kPlayersPerTeam) {
        throw std::logic_error("fixture must have five players per team");
    }
    std::uniform_int_distribution<int> cell(0, kMaxCellIndex);
    std::uniform_real_distribution<float> off(-4.0F, 4.0F);
    auto update = [&](std::uint8_t id) {
        return tickstream::EntityUpdate{id, static_cast<std::uint8_t>(cell(rng)), static_cast<std::uint8_t>(cell(rng)),
                                        {off(rng), off(rng)}};
    };
    tickstream::Frame key;
    for (const auto& p : s.header.players) key.updates.push_back(update(p.entity_id));
    s.frames.push_back(std::move(key));
    std::uint32_t tick = 0;
    const int frames = std::uniform_int_distribution<int>(0, max_frames)(rng);
    for (int f = 0; f < frames; ++f) {
        tick += static_cast<std::uint32_t>(std::uniform_int_distribution<int>(1, 90)(rng));
        tickstream::Frame fr;
        fr.tick = tick;
        std::vector<std::uint8_t> slots(s.header.players.size());
        for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = s.header.players[i].entity_id;
        std::shuffle(slots.begin(), slots.end(), rng);
        const int n = std::uniform_int_distribution<int>(0, kPlayersPerMatch)(rng);
        for (int u = 0; u < n; ++u) fr.updates.push_back(update(slots[u]));
        s.frames.push_back(std::move(fr));
    }
    return s;
}

/// Map painted with `fill` except for the listed cells.
inline ZoneMap painted_map(ZoneLabel fill, const std::vector<std::pair<GridCell, ZoneLabel>>& cells = {}) {
    ZoneMap::Grid grid;
    grid.fill(fill);
    for (const auto& [c, z] : cells) grid[c.index()] = z;
    return ZoneMap(grid, ZoneLegend::standard());
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mobatrack_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace mobatrack::testing
