#include "mobatrack/trajectory_csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace mobatrack {

namespace csv {

std::vector<std::string> split(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

long long parse_int(std::string_view s, std::string_view field) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw FormatError("bad integer '" + std::string(s) + "' in field " + std::string(field));
    }
    return v;
}

double parse_double(std::string_view s, std::string_view field) {
    if (s == "inf") return HUGE_VAL;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw FormatError("bad number '" + std::string(s) + "' in field " + std::string(field));
    }
    return v;
}

}  // namespace csv

namespace {

void expect_header(std::istream& in, std::string_view header) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty CSV, expected header '" + std::string(header) + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw FormatError("unexpected CSV header '" + line + "'");
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const MatchRecord& match) {
    out << kTrajectoryCsvHeader << '\n';
    for (const auto& track : match.tracks()) {
        const auto cells = track.cells();
        for (std::size_t t = 0; t < cells.size(); ++t) {
            out << match.match_id() << ',' << to_string(track.team()) << ',' << track.player_id() << ',' << t << ','
                << cells[t].x() << ',' << cells[t].y() << '\n';
        }
    }
}

TrajectoryTable read_trajectory_csv(std::istream& in) {
    expect_header(in, kTrajectoryCsvHeader);

    struct Pending {
        PlayerId id;
        Team team;
        std::vector<GridCell> cells;
    };
    std::vector<Pending> pending;
    std::map<std::pair<int, PlayerId>, std::size_t> slot_of;
    std::optional<MatchId> match_id;

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 6) throw FormatError("line " + std::to_string(line_no) + ": expected 6 fields");
        try {
            const auto mid = static_cast<MatchId>(csv::parse_int(f[0], "match_id"));
            if (match_id && *match_id != mid) throw FormatError("mixed match ids in one trajectory file");
            match_id = mid;
            const Team team = parse_team(f[1]);
            const auto pid = static_cast<PlayerId>(csv::parse_int(f[2], "player_id"));
            const auto t = csv::parse_int(f[3], "t");
            const auto x = csv::parse_int(f[4], "x");
            const auto y = csv::parse_int(f[5], "y");
            if (!GridCell::in_range(static_cast<int>(x)) || !GridCell::in_range(static_cast<int>(y))) {
                throw FormatError("cell out of range");
            }
            const auto key = std::make_pair(static_cast<int>(team), pid);
            auto it = slot_of.find(key);
            if (it == slot_of.end()) {
                it = slot_of.emplace(key, pending.size()).first;
                pending.push_back({pid, team, {}});
            }
            auto& p = pending[it->second];
            if (t != static_cast<long long>(p.cells.size())) {
                throw FormatError("non-consecutive t " + std::to_string(t) + " for player " + std::to_string(pid));
            }
            p.cells.emplace_back(static_cast<int>(x), static_cast<int>(y));
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!match_id) throw FormatError("trajectory CSV has no rows");

    TrajectoryTable table;
    table.match_id = *match_id;
    for (auto& p : pending) table.tracks.emplace_back(p.id, p.team, std::move(p.cells));
    return table;
}

void write_metadata_csv(std::ostream& out, std::span<const MatchMeta> rows) {
    out << kMetadataCsvHeader << '\n';
    for (const auto& m : rows) {
        out << m.match_id << ',' << to_string(m.tier) << ',' << to_string(m.winner) << ',' << m.duration_s << '\n';
    }
}

std::vector<MatchMeta> read_metadata_csv(std::istream& in) {
    expect_header(in, kMetadataCsvHeader);
    std::vector<MatchMeta> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 4) throw FormatError("metadata line " + std::to_string(line_no) + ": expected 4 fields");
        try {
            MatchMeta m;
            m.match_id = static_cast<MatchId>(csv::parse_int(f[0], "match_id"));
            m.tier = parse_tier(f[1]);
            m.winner = parse_team(f[2]);
            m.duration_s = csv::parse_int(f[3], "duration_s");
            if (m.duration_s < 0) throw FormatError("negative duration");
            rows.push_back(m);
        } catch (const FormatError& e) {
            throw FormatError("metadata line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

MatchRecord to_match_record(TrajectoryTable table, const MatchMeta& meta) {
    if (table.match_id != meta.match_id) {
        throw FormatError("metadata match id " + std::to_string(meta.match_id) + " does not match trajectories " +
                          std::to_string(table.match_id));
    }
    return MatchRecord(meta, std::move(table.tracks));
}

}  // namespace mobatrack
