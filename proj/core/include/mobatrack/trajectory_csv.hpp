#pragma once

// Text exports of decoded matches:
//   trajectories  match_id,team,player_id,t,x,y
//   metadata      match_id,tier,winner,duration_s

#include "mobatrack/core.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mobatrack {

inline constexpr std::string_view kTrajectoryCsvHeader = "match_id,team,player_id,t,x,y";
inline constexpr std::string_view kMetadataCsvHeader = "match_id,tier,winner,duration_s";

void write_trajectory_csv(std::ostream& out, const MatchRecord& match);

/// Tracks read back from a trajectory CSV, in first-appearance order.
struct TrajectoryTable {
    MatchId match_id = 0;
    std::vector<PlayerTrack> tracks;
};

/// Throws FormatError on malformed rows, mixed match ids, or gaps in t.
TrajectoryTable read_trajectory_csv(std::istream& in);

void write_metadata_csv(std::ostream& out, std::span<const MatchMeta> rows);
std::vector<MatchMeta> read_metadata_csv(std::istream& in);

/// Joins a trajectory table with its metadata row.
MatchRecord to_match_record(TrajectoryTable table, const MatchMeta& meta);

namespace csv {

/// Splits one line on commas; no quoting (none of our fields need it).
std::vector<std::string> split(std::string_view line);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

long long parse_int(std::string_view s, std::string_view field);
double parse_double(std::string_view s, std::string_view field);

}  // namespace csv

}  // namespace mobatrack
