#pragma once

#include "mobatrack/core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobatrack::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitDataError = 2,
    kExitPartialFailure = 3,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kWorkersEnv = "MOBATRACK_WORKERS";

/// Settings shared by every subcommand.
struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::optional<std::filesystem::path> meta;
    std::optional<std::filesystem::path> zone_map;
    std::optional<std::filesystem::path> legend;
    std::filesystem::path out_dir = ".";

    Seconds min_dwell_s = 5;
    Seconds ma_window_s = 1;
    int k = 3;
    double r = 1.15;
    std::optional<int> m = 5;  // empty = pick by minimum entropy
    int delay = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    std::optional<Seconds> from_s;
    std::optional<Seconds> to_s;
    std::optional<SkillTier> tier;
    std::optional<PlayerId> player;

    // synth
    int count = 10;
    Seconds length_s = 1800;
    std::optional<double> spread_sigma;
    std::optional<double> switch_rate;

    // zonemap-draft
    bool reference = false;

    /// Applies one `key=value` setting; keys match the long flag names.
    /// Throws UsageError on unknown keys or unparsable values.
    void apply(std::string_view key, std::string_view value);

    /// Reads a key=value file; blank lines and '#' comments are skipped.
    void load_file(const std::filesystem::path& path);

    /// Picks up the worker count from MOBATRACK_WORKERS when set.
    void apply_environment();

    /// Stable text rendering of the analysis settings and fixed constants.
    std::string snapshot() const;
};

}  // namespace mobatrack::cli
