#pragma once

#include "run_config.hpp"

#include "mobatrack/core.hpp"
#include "mobatrack/zonemap.hpp"

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobatrack::cli {

/// Bad or missing input data; maps to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output file names, relative to the output directory.
namespace files {
inline constexpr const char* kZoneChanges = "zone_changes.csv";
inline constexpr const char* kDistance = "distance.csv";
inline constexpr const char* kPhases = "phase_aggregate.csv";
inline constexpr const char* kAnovaCsv = "anova.csv";
inline constexpr const char* kAnovaJson = "anova.json";
inline constexpr const char* kDissimilarity = "dissimilarity.csv";
inline constexpr const char* kMemberships = "memberships.csv";
inline constexpr const char* kSilhouette = "silhouette.csv";
inline constexpr const char* kClusterReport = "cluster_report.json";
inline constexpr const char* kHeatmapCsv = "heatmap.csv";
inline constexpr const char* kHeatmapPpm = "heatmap.ppm";
inline constexpr const char* kMetadata = "metadata.csv";
inline constexpr const char* kZonesPpm = "zones.ppm";
inline constexpr const char* kZonesLegend = "zones.legend";
}  // namespace files

std::string match_file_stem(MatchId id);

/// Directories expand to their .dtl2 files and trajectory CSVs, sorted by
/// name; plain file arguments are kept as given.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs);

/// Loads every input. With `require_meta` each match must appear in the
/// metadata file; otherwise missing metadata falls back to the stream
/// length. Matches come back sorted by id. Throws DataError after printing
/// one line per failing file to `err`.
std::vector<MatchRecord> load_matches(const RunConfig& config, bool require_meta, std::ostream& err);

/// The configured map, or the built-in reference map when none is given.
ZoneMap load_zone_map(const RunConfig& config);

using VisitGrid = std::array<std::uint64_t, static_cast<std::size_t>(kGridSize) * kGridSize>;

/// Player-seconds per cell (indexed by GridCell::index()) over seconds
/// [from, to], optionally for a single player.
VisitGrid visit_counts(std::span<const MatchRecord> matches, std::optional<Seconds> from,
                       std::optional<Seconds> to, std::optional<PlayerId> player = std::nullopt);

int cmd_ingest(const RunConfig& config, std::ostream& err);
int cmd_zones(const RunConfig& config, std::ostream& err);
int cmd_distance(const RunConfig& config, std::ostream& err);
int cmd_phases(const RunConfig& config, std::ostream& err);
int cmd_anova(const RunConfig& config, std::ostream& err);
int cmd_cluster(const RunConfig& config, std::ostream& err);
int cmd_heatmap(const RunConfig& config, std::ostream& err);
int cmd_synth(const RunConfig& config, std::ostream& err);
int cmd_zonemap_draft(const RunConfig& config, std::ostream& err);

/// Parses arguments (without the program name) and dispatches. Returns the
/// process exit code; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mobatrack::cli
