#include "mobatrack/synth.hpp"

#include "mobatrack/tickstream.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mobatrack::synth {

namespace {

constexpr std::array<ZoneLabel, 4> kWaypointZones = {ZoneLabel::TopLane, ZoneLabel::MiddleLane,
                                                     ZoneLabel::BottomLane, ZoneLabel::Jungle};
constexpr int kPlacementTries = 64;

void validate(const RegimeParams& p) {
    if (!(p.spread_sigma > 0.0) || !std::isfinite(p.spread_sigma)) {
        throw std::invalid_argument("spread_sigma must be positive");
    }
    if (!(p.switch_rate > 0.0) || p.switch_rate > kMaxSwitchRate) {
        throw std::invalid_argument("switch_rate must lie in (0, 12] changes per minute");
    }
    if (p.match_len_s <= 0) throw std::invalid_argument("match_len_s must be positive");
}

class TeamWalker {
public:
    TeamWalker(const RegimeParams& params, const std::array<std::vector<GridCell>, 4>& zone_cells, const ZoneMap& map,
               std::uint64_t seed, Team team)
        : params_(params), zone_cells_(zone_cells), map_(map) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(team), static_cast<std::uint32_t>(params.seed),
                          static_cast<std::uint32_t>(params.seed >> 32)};
        rng_.seed(seq);
        zone_ = std::uniform_int_distribution<std::size_t>(0, kWaypointZones.size() - 1)(rng_);
        relocate();
        next_switch_ = draw_hold();
    }

    // Advances to second s; true when the team jumped.
    bool step(Seconds s) {
        if (s != next_switch_) return false;
        const auto shift = std::uniform_int_distribution<std::size_t>(1, kWaypointZones.size() - 1)(rng_);
        zone_ = (zone_ + shift) % kWaypointZones.size();
        relocate();
        next_switch_ = s + draw_hold();
        return true;
    }

    const std::array<GridCell, kPlayersPerTeam>& positions() const { return positions_; }
    std::mt19937_64& rng() { return rng_; }

private:
    Seconds draw_hold() {
        const double extra_mean = 60.0 / params_.switch_rate - static_cast<double>(kDeadTime);
        if (extra_mean <= 0.0) return kDeadTime;
        const double extra = std::exponential_distribution<double>(1.0 / extra_mean)(rng_);
        return std::max<Seconds>(kDeadTime, static_cast<Seconds>(std::llround(static_cast<double>(kDeadTime) + extra)));
    }

    void relocate() {
        const auto& cells = zone_cells_[zone_];
        const GridCell anchor = cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng_)];
        const ZoneLabel zone = kWaypointZones[zone_];
        std::normal_distribution<double> offset(0.0, params_.spread_sigma);
        for (auto& pos : positions_) {
            pos = anchor;
            for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
                const auto x = static_cast<int>(std::lround(anchor.x() + offset(rng_)));
                const auto y = static_cast<int>(std::lround(anchor.y() + offset(rng_)));
                if (!GridCell::in_range(x) || !GridCell::in_range(y)) continue;
                const GridCell candidate(x, y);
                if (map_.zone_of(candidate) == zone) {
                    pos = candidate;
                    break;
                }
            }
        }
    }

    RegimeParams params_;
    const std::array<std::vector<GridCell>, 4>& zone_cells_;
    const ZoneMap& map_;
    std::mt19937_64 rng_;
    std::size_t zone_ = 0;
    Seconds next_switch_ = 0;
    std::array<GridCell, kPlayersPerTeam> positions_{};
};

}  // namespace

RegimeParams regime_for_tier(SkillTier tier, Seconds match_len_s) {
    switch (tier) {
        case SkillTier::Professional: return {6.0, 6.0, match_len_s, 0};
        case SkillTier::VeryHigh: return {8.0, 5.0, match_len_s, 0};
        case SkillTier::High: return {10.0, 4.0, match_len_s, 0};
        case SkillTier::Normal: return {14.0, 2.0, match_len_s, 0};
    }
    return {};
}

SynthMatch generate_match(const RegimeParams& radiant, const RegimeParams& dire, const ZoneMap& map,
                          std::uint64_t seed, const MatchOptions& options) {
    validate(radiant);
    validate(dire);
    if (radiant.match_len_s != dire.match_len_s) throw std::invalid_argument("teams must share one match length");
    const Seconds len = radiant.match_len_s;

    std::array<std::vector<GridCell>, 4> zone_cells;
    for (std::size_t z = 0; z < kWaypointZones.size(); ++z) {
        zone_cells[z] = map.cells_of(kWaypointZones[z]);
        if (zone_cells[z].empty()) {
            throw std::invalid_argument("zone map has no " + std::string(to_string(kWaypointZones[z])) + " cells");
        }
    }

    std::mt19937_64 master(seed);
    SynthMatch out;
    out.meta.match_id = options.match_id;
    out.meta.tier = options.tier;
    out.meta.duration_s = len;
    out.meta.winner = options.winner.value_or(std::bernoulli_distribution(0.5)(master) ? Team::Radiant : Team::Dire);

    tickstream::StreamHeader header;
    header.match_id = options.match_id;
    header.tick_interval_ms = kDefaultTickIntervalMs;
    for (int slot = 0; slot < kPlayersPerMatch; ++slot) {
        const Team team = slot < kPlayersPerTeam ? Team::Radiant : Team::Dire;
        header.players.push_back({static_cast<std::uint8_t>(slot + 1), team, static_cast<PlayerId>(master())});
    }

    std::array<TeamWalker, 2> teams = {TeamWalker(radiant, zone_cells, map, seed, Team::Radiant),
                                       TeamWalker(dire, zone_cells, map, seed, Team::Dire)};
    std::uniform_real_distribution<float> frac(0.0F, 1.0F);
    auto update_for = [&](int slot, GridCell c) {
        return tickstream::EntityUpdate{static_cast<std::uint8_t>(slot + 1), static_cast<std::uint8_t>(c.x()),
                                        static_cast<std::uint8_t>(c.y()), {frac(master), frac(master)}};
    };

    std::vector<tickstream::Frame> frames;
    tickstream::Frame key;
    key.tick = 0;
    for (int t = 0; t < 2; ++t) {
        for (int p = 0; p < kPlayersPerTeam; ++p) key.updates.push_back(update_for(t * kPlayersPerTeam + p, teams[t].positions()[p]));
    }
    frames.push_back(std::move(key));

    for (Seconds s = 1; s <= len; ++s) {
        tickstream::Frame frame;
        frame.tick = tickstream::first_tick_of_second(s, header.tick_interval_ms);
        for (int t = 0; t < 2; ++t) {
            const auto before = teams[t].positions();
            if (!teams[t].step(s)) continue;
            for (int p = 0; p < kPlayersPerTeam; ++p) {
                if (teams[t].positions()[p] != before[p]) {
                    frame.updates.push_back(update_for(t * kPlayersPerTeam + p, teams[t].positions()[p]));
                }
            }
        }
        // The final second always gets a frame so the stream encodes its length.
        if (!frame.updates.empty() || s == len) frames.push_back(std::move(frame));
    }

    out.stream = tickstream::encode(header, frames);
    return out;
}

}  // namespace mobatrack::synth
