#include "run_config.hpp"

#include "mobatrack/measures.hpp"
#include "mobatrack/pdclust.hpp"
#include "mobatrack/trajectory_csv.hpp"
#include "mobatrack/zonemap.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mobatrack::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

long long as_int(std::string_view key, std::string_view v) {
    try {
        return csv::parse_int(v, key);
    } catch (const FormatError&) {
        throw UsageError("--" + std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
    }
}

double as_double(std::string_view key, std::string_view v) {
    try {
        return csv::parse_double(v, key);
    } catch (const FormatError&) {
        throw UsageError("--" + std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    }
}

bool as_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("--" + std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

}  // namespace

void RunConfig::apply(std::string_view key, std::string_view value) {
    if (key == "input") {
        inputs.emplace_back(std::string(value));
    } else if (key == "meta") {
        meta = std::string(value);
    } else if (key == "map") {
        zone_map = std::string(value);
    } else if (key == "legend") {
        legend = std::string(value);
    } else if (key == "out") {
        out_dir = std::string(value);
    } else if (key == "min-dwell") {
        min_dwell_s = as_int(key, value);
        if (min_dwell_s < 1) throw UsageError("--min-dwell must be at least 1");
    } else if (key == "window") {
        ma_window_s = as_int(key, value);
        if (ma_window_s < 1) throw UsageError("--window must be at least 1");
    } else if (key == "k") {
        k = static_cast<int>(as_int(key, value));
        if (k < 2) throw UsageError("--k must be at least 2");
    } else if (key == "r") {
        r = as_double(key, value);
        if (!(r > 1.0)) throw UsageError("--r must exceed 1");
    } else if (key == "m") {
        if (value == "auto") {
            m.reset();
        } else {
            m = static_cast<int>(as_int(key, value));
            if (*m < pdclust::kMinDimension || *m > pdclust::kMaxDimension) {
                throw UsageError("--m must be 'auto' or lie in [2,7]");
            }
        }
    } else if (key == "delay") {
        delay = static_cast<int>(as_int(key, value));
        if (delay < 1) throw UsageError("--delay must be at least 1");
    } else if (key == "seed") {
        const auto s = as_int(key, value);
        if (s < 0) throw UsageError("--seed must be non-negative");
        seed = static_cast<std::uint64_t>(s);
    } else if (key == "workers") {
        const auto w = as_int(key, value);
        if (w < 1) throw UsageError("--workers must be at least 1");
        workers = static_cast<std::size_t>(w);
    } else if (key == "from") {
        from_s = as_int(key, value);
    } else if (key == "to") {
        to_s = as_int(key, value);
    } else if (key == "tier") {
        try {
            tier = parse_tier(value);
        } catch (const FormatError& e) {
            throw UsageError(std::string("--tier: ") + e.what());
        }
    } else if (key == "player") {
        const auto p = as_int(key, value);
        if (p < 0 || p > static_cast<long long>(UINT32_MAX)) throw UsageError("--player is out of range");
        player = static_cast<PlayerId>(p);
    } else if (key == "count") {
        count = static_cast<int>(as_int(key, value));
        if (count < 1) throw UsageError("--count must be at least 1");
    } else if (key == "length") {
        length_s = as_int(key, value);
        if (length_s < 1) throw UsageError("--length must be at least 1");
    } else if (key == "spread") {
        spread_sigma = as_double(key, value);
    } else if (key == "switch-rate") {
        switch_rate = as_double(key, value);
    } else if (key == "reference") {
        reference = as_bool(key, value);
    } else {
        throw UsageError("unknown setting '" + std::string(key) + "'");
    }
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void RunConfig::apply_environment() {
    if (const char* w = std::getenv(kWorkersEnv); w != nullptr && *w != '\0') apply("workers", w);
}

std::string RunConfig::snapshot() const {
    std::ostringstream os;
    os << "min_dwell_s=" << min_dwell_s << '\n'
       << "moving_average_window_s=" << ma_window_s << '\n'
       << "k=" << k << '\n'
       << "r=" << csv::format_double(r) << '\n'
       << "m=" << (m ? std::to_string(*m) : "auto") << '\n'
       << "delay=" << delay << '\n'
       << "seed=" << seed << '\n'
       << "phase_mid_start_s=" << kMidPhaseStart << '\n'
       << "phase_late_start_s=" << kLatePhaseStart << '\n'
       << "tick_interval_ms=" << kDefaultTickIntervalMs << '\n'
       << "grid=" << kGridSize << 'x' << kGridSize << '\n'
       << "zone_labels=" << kZoneCount << '\n';
    return os.str();
}

}  // namespace mobatrack::cli
