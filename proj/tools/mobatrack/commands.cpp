#include "commands.hpp"

#include "mobatrack/measures.hpp"
#include "mobatrack/parallel.hpp"
#include "mobatrack/pdclust.hpp"
#include "mobatrack/stats.hpp"
#include "mobatrack/synth.hpp"
#include "mobatrack/tickstream.hpp"
#include "mobatrack/trajectory_csv.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>

namespace mobatrack::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("cannot write " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw DataError("cannot write " + path.string());
}

fs::path prepare_out_dir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw DataError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());
    return config.out_dir;
}

bool is_dtl2(const fs::path& p) { return p.extension() == ".dtl2"; }

bool is_trajectory_csv(const fs::path& p) {
    if (p.extension() != ".csv") return false;
    std::ifstream in(p);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    return first == kTrajectoryCsvHeader;
}

std::map<MatchId, MatchMeta> load_meta(const RunConfig& config, bool required) {
    std::map<MatchId, MatchMeta> out;
    if (!config.meta) {
        if (required) throw UsageError("--meta is required for this command");
        return out;
    }
    std::ifstream in(*config.meta);
    if (!in) throw DataError("cannot read metadata " + config.meta->string());
    try {
        for (const auto& row : read_metadata_csv(in)) {
            if (!out.emplace(row.match_id, row).second) {
                throw DataError("duplicate match " + std::to_string(row.match_id) + " in metadata");
            }
        }
    } catch (const FormatError& e) {
        throw DataError(config.meta->string() + ": " + e.what());
    }
    return out;
}

MatchRecord load_one(const fs::path& path, const std::map<MatchId, MatchMeta>& meta, bool require_meta) {
    auto lookup = [&](MatchId id) -> const MatchMeta* {
        const auto it = meta.find(id);
        if (it != meta.end()) return &it->second;
        if (require_meta) throw DataError("no metadata for match " + std::to_string(id));
        return nullptr;
    };
    if (is_dtl2(path)) {
        const auto bytes = read_bytes(path);
        const auto stream = tickstream::decode(bytes);
        if (const MatchMeta* m = lookup(stream.header.match_id)) {
            return tickstream::to_match_record(stream, m->tier, m->winner, m->duration_s);
        }
        return tickstream::to_match_record(stream, SkillTier::Normal, Team::Radiant);
    }
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    auto table = read_trajectory_csv(in);
    const MatchId id = table.match_id;
    if (const MatchMeta* m = lookup(id)) return to_match_record(std::move(table), *m);
    MatchMeta fallback;
    fallback.match_id = id;
    fallback.duration_s = table.tracks.empty() ? 0 : static_cast<Seconds>(table.tracks.front().size()) - 1;
    return to_match_record(std::move(table), fallback);
}

std::string win_flag(bool win) { return win ? "1" : "0"; }
std::string outcome_name(bool win) { return win ? "win" : "loss"; }

std::string series_id(MatchId id, Team team) { return std::to_string(id) + "_" + std::string(to_string(team)); }

struct TeamSeries {
    MatchId match_id = 0;
    Team team = Team::Radiant;
    SkillTier tier = SkillTier::Normal;
    bool win = false;
    std::vector<double> values;
};

// Moving-averaged distance series, two per match in (match, Radiant, Dire) order.
std::vector<TeamSeries> team_series(std::span<const MatchRecord> matches, Seconds window, std::size_t workers) {
    std::vector<TeamSeries> out(matches.size() * 2);
    parallel_for(out.size(), workers, [&](std::size_t i) {
        const MatchRecord& m = matches[i / 2];
        const Team team = kTeams[i % 2];
        const auto raw = measures::distance_series(m, team);
        out[i] = {m.match_id(), team, m.tier(), m.won(team), measures::moving_average(raw.values, window)};
    });
    return out;
}

std::vector<measures::ZoneChangeStats> zone_stats(std::span<const MatchRecord> matches, const ZoneMap& map,
                                                  Seconds min_dwell, std::size_t workers) {
    std::vector<measures::ZoneChangeStats> out(matches.size() * kPlayersPerMatch);
    parallel_for(out.size(), workers, [&](std::size_t i) {
        const auto& track = matches[i / kPlayersPerMatch].tracks()[i % kPlayersPerMatch];
        out[i] = measures::zone_change_stats(track, map, min_dwell);
    });
    return out;
}

}  // namespace

std::string match_file_stem(MatchId id) { return "match_" + std::to_string(id); }

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        if (!fs::is_directory(in)) {
            out.push_back(in);
            continue;
        }
        std::vector<fs::path> found;
        for (const auto& entry : fs::directory_iterator(in)) {
            if (!entry.is_regular_file()) continue;
            if (is_dtl2(entry.path()) || is_trajectory_csv(entry.path())) found.push_back(entry.path());
        }
        std::sort(found.begin(), found.end());
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

std::vector<MatchRecord> load_matches(const RunConfig& config, bool require_meta, std::ostream& err) {
    const auto paths = expand_inputs(config.inputs);
    if (paths.empty()) throw DataError("no input matches");
    const auto meta = load_meta(config, require_meta);

    std::vector<std::optional<MatchRecord>> loaded(paths.size());
    std::vector<std::string> errors(paths.size());
    parallel_for(paths.size(), config.workers, [&](std::size_t i) {
        try {
            loaded[i] = load_one(paths[i], meta, require_meta);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    std::size_t failed = 0;
    std::vector<MatchRecord> out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (!errors[i].empty()) {
            err << "error: " << paths[i].string() << ": " << errors[i] << '\n';
            ++failed;
        } else {
            out.push_back(std::move(*loaded[i]));
        }
    }
    if (failed > 0) throw DataError(std::to_string(failed) + " input file(s) failed to load");
    std::sort(out.begin(), out.end(), [](const MatchRecord& a, const MatchRecord& b) { return a.match_id() < b.match_id(); });
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].match_id() == out[i - 1].match_id()) {
            throw DataError("match " + std::to_string(out[i].match_id()) + " appears twice in the input");
        }
    }
    return out;
}

ZoneMap load_zone_map(const RunConfig& config) {
    if (!config.zone_map) {
        if (config.legend) throw UsageError("--legend needs --map");
        return reference_zone_map();
    }
    const auto bytes = read_bytes(*config.zone_map);
    const std::string legend = config.legend ? read_text(*config.legend) : ZoneLegend::standard().to_text();
    try {
        return ZoneMap::load(bytes, legend);
    } catch (const FormatError& e) {
        throw DataError(config.zone_map->string() + ": " + e.what());
    }
}

VisitGrid visit_counts(std::span<const MatchRecord> matches, std::optional<Seconds> from, std::optional<Seconds> to,
                       std::optional<PlayerId> player) {
    VisitGrid grid{};
    for (const auto& m : matches) {
        for (const auto& track : m.tracks()) {
            if (player && track.player_id() != *player) continue;
            const auto cells = track.cells();
            const Seconds last = static_cast<Seconds>(cells.size()) - 1;
            const Seconds begin = std::max<Seconds>(0, from.value_or(0));
            const Seconds end = std::min(last, to.value_or(last));
            for (Seconds t = begin; t <= end; ++t) ++grid[cells[static_cast<std::size_t>(t)].index()];
        }
    }
    return grid;
}

int cmd_ingest(const RunConfig& config, std::ostream& err) {
    const auto paths = expand_inputs(config.inputs);
    if (paths.empty()) throw UsageError("ingest needs at least one input");
    const auto meta = load_meta(config, false);
    const auto out_dir = prepare_out_dir(config);

    std::vector<std::string> errors(paths.size());
    parallel_for(paths.size(), config.workers, [&](std::size_t i) {
        try {
            const auto record = load_one(paths[i], meta, false);
            std::ostringstream os;
            write_trajectory_csv(os, record);
            write_text(out_dir / (match_file_stem(record.match_id()) + ".csv"), os.str());
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    std::size_t failed = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (errors[i].empty()) continue;
        err << "error: " << paths[i].string() << ": " << errors[i] << '\n';
        ++failed;
    }
    if (failed == 0) return kExitOk;
    return failed == paths.size() ? kExitDataError : kExitPartialFailure;
}

int cmd_zones(const RunConfig& config, std::ostream& err) {
    const auto map = load_zone_map(config);
    const auto matches = load_matches(config, true, err);
    const auto stats = zone_stats(matches, map, config.min_dwell_s, config.workers);

    std::ostringstream os;
    os << "match_id,player_id,team,tier,win,changes,rate_per_min\n";
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& m = matches[i / kPlayersPerMatch];
        const auto& track = m.tracks()[i % kPlayersPerMatch];
        os << m.match_id() << ',' << stats[i].player_id << ',' << to_string(track.team()) << ','
           << to_string(m.tier()) << ',' << win_flag(m.won(track.team())) << ',' << stats[i].changes << ','
           << csv::format_double(stats[i].rate_per_min) << '\n';
    }
    write_text(prepare_out_dir(config) / files::kZoneChanges, os.str());
    return kExitOk;
}

int cmd_distance(const RunConfig& config, std::ostream& err) {
    const auto matches = load_matches(config, true, err);
    const auto series = team_series(matches, config.ma_window_s, config.workers);

    std::ostringstream os;
    os << "match_id,team,t,d\n";
    for (const auto& s : series) {
        for (std::size_t t = 0; t < s.values.size(); ++t) {
            os << s.match_id << ',' << to_string(s.team) << ',' << t << ',' << csv::format_double(s.values[t]) << '\n';
        }
    }
    write_text(prepare_out_dir(config) / files::kDistance, os.str());
    return kExitOk;
}

int cmd_phases(const RunConfig& config, std::ostream& err) {
    const auto matches = load_matches(config, true, err);
    const auto series = team_series(matches, config.ma_window_s, config.workers);

    std::vector<measures::LabeledSeries> labeled;
    labeled.reserve(series.size());
    for (const auto& s : series) labeled.push_back({s.tier, s.win, s.values});

    std::vector<SkillTier> tiers;
    for (const SkillTier tier : kSkillTiers) {
        const bool present = std::any_of(matches.begin(), matches.end(), [&](const MatchRecord& m) { return m.tier() == tier; });
        if (config.tier ? *config.tier == tier : present) tiers.push_back(tier);
    }

    std::ostringstream os;
    os << "tier,outcome,phase,t,mean_d,n_matches\n";
    for (const SkillTier tier : tiers) {
        for (const bool win : {true, false}) {
            for (const Phase phase : kPhases) {
                measures::CategoryAggregate agg;
                try {
                    agg = measures::aggregate_by_category(labeled, tier, win, phase);
                } catch (const std::invalid_argument&) {
                    throw DataError("no " + outcome_name(win) + " matches for tier " + std::string(to_string(tier)));
                }
                for (const auto& p : agg.points) {
                    os << to_string(tier) << ',' << outcome_name(win) << ',' << to_string(phase) << ',' << p.t << ','
                       << csv::format_double(p.mean) << ',' << p.n_matches << '\n';
                }
            }
        }
    }
    write_text(prepare_out_dir(config) / files::kPhases, os.str());
    return kExitOk;
}

int cmd_anova(const RunConfig& config, std::ostream& err) {
    const auto map = load_zone_map(config);
    const auto matches = load_matches(config, true, err);
    const auto stats = zone_stats(matches, map, config.min_dwell_s, config.workers);
    const auto series = team_series(matches, config.ma_window_s, config.workers);

    struct Observation {
        SkillTier tier;
        bool win;
        double value;
    };
    std::vector<Observation> rates;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& m = matches[i / kPlayersPerMatch];
        const Team team = m.tracks()[i % kPlayersPerMatch].team();
        rates.push_back({m.tier(), m.won(team), stats[i].rate_per_min});
    }
    std::vector<Observation> distances;
    for (const auto& s : series) {
        const double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(s.values.size());
        distances.push_back({s.tier, s.win, mean});
    }

    std::ostringstream csv_out;
    csv_out << "measure,factor,F,df1,df2,p\n";
    auto rows = nlohmann::ordered_json::array();
    int failures = 0;

    auto run_one = [&](const std::string& measure, const std::vector<Observation>& obs, const std::string& factor) {
        std::vector<std::string> labels;
        std::vector<std::vector<double>> groups;
        auto add_group = [&](const std::string& label, auto&& pred) {
            std::vector<double> g;
            for (const auto& o : obs) {
                if (pred(o)) g.push_back(o.value);
            }
            if (!g.empty()) {
                labels.push_back(label);
                groups.push_back(std::move(g));
            }
        };
        if (factor == "tier") {
            for (const SkillTier t : kSkillTiers) add_group(std::string(to_string(t)), [t](const Observation& o) { return o.tier == t; });
        } else {
            for (const bool w : {false, true}) add_group(outcome_name(w), [w](const Observation& o) { return o.win == w; });
        }
        if (groups.size() < 2) {
            err << "warning: " << measure << " by " << factor << ": fewer than two groups, skipped\n";
            return;
        }
        stats::AnovaResult res;
        try {
            res = stats::one_way_anova(groups);
        } catch (const std::exception& e) {
            err << "error: " << measure << " by " << factor << ": " << e.what() << '\n';
            ++failures;
            return;
        }
        const std::string f_text = res.infinite_f ? "inf" : csv::format_double(res.f);
        csv_out << measure << ',' << factor << ',' << f_text << ',' << res.df_between << ',' << res.df_within << ','
                << stats::format_p_value(res.p) << '\n';

        nlohmann::ordered_json row;
        row["measure"] = measure;
        row["factor"] = factor;
        row["F"] = res.infinite_f ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(res.f);
        row["df1"] = res.df_between;
        row["df2"] = res.df_within;
        row["p"] = res.p;
        row["p_text"] = stats::format_p_value(res.p);
        auto jgroups = nlohmann::ordered_json::array();
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto d = stats::describe(groups[g]);
            jgroups.push_back({{"label", labels[g]}, {"n", d.n}, {"mean", d.mean}, {"variance", d.variance}});
        }
        row["groups"] = std::move(jgroups);
        rows.push_back(std::move(row));
    };

    for (const auto& factor : {std::string("tier"), std::string("outcome")}) {
        run_one("zone_change_rate", rates, factor);
        run_one("team_distance", distances, factor);
    }
    if (rows.empty()) throw DataError("no ANOVA could be computed");

    const auto out_dir = prepare_out_dir(config);
    write_text(out_dir / files::kAnovaCsv, csv_out.str());
    write_text(out_dir / files::kAnovaJson, rows.dump(2) + "\n");
    return failures > 0 ? kExitDataError : kExitOk;
}

int cmd_cluster(const RunConfig& config, std::ostream& err) {
    const auto matches = load_matches(config, true, err);
    const auto series = team_series(matches, config.ma_window_s, config.workers);
    if (static_cast<std::size_t>(config.k) >= series.size()) {
        throw DataError("k = " + std::to_string(config.k) + " needs more than " + std::to_string(series.size()) + " series");
    }

    std::vector<std::vector<double>> values;
    std::vector<std::string> ids;
    std::vector<pdclust::SeriesInfo> info;
    values.reserve(series.size());
    for (const auto& s : series) {
        values.push_back(s.values);
        ids.push_back(series_id(s.match_id, s.team));
    }
    for (std::size_t i = 0; i < series.size(); ++i) info.push_back({ids[i], series[i].tier, series[i].win, values[i]});

    pdclust::ClusterConfig cc;
    cc.k = config.k;
    cc.r = config.r;
    cc.delay = config.delay;
    cc.seed = config.seed;
    try {
        cc.m = config.m ? *config.m : pdclust::min_entropy_dimension(values, pdclust::kMinDimension, pdclust::kMaxDimension, config.delay);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("series too short for embedding: ") + e.what());
    }

    const auto d = pdclust::distance_matrix(values, cc.m, cc.delay, ids, config.workers);
    const auto fuzzy = pdclust::fanny(d, cc.k, cc.r, 1e-9, 500, cc.seed);
    if (!fuzzy.converged) err << "warning: fuzzy clustering stopped at the iteration limit\n";
    const auto sil = pdclust::silhouette(d, fuzzy.crisp);
    const auto report = pdclust::cluster_report(info, fuzzy.crisp, &sil);
    const auto medoids = pdclust::pam(d, cc.k, cc.seed);
    const auto pam_sil = pdclust::silhouette(d, medoids.assignment);

    const auto out_dir = prepare_out_dir(config);
    {
        std::ostringstream os;
        d.write_csv(os);
        write_text(out_dir / files::kDissimilarity, os.str());
    }
    {
        std::ostringstream os;
        os << "id,cluster";
        for (int v = 0; v < cc.k; ++v) os << ",u" << (v + 1);
        os << '\n';
        for (std::size_t i = 0; i < ids.size(); ++i) {
            os << ids[i] << ',' << (fuzzy.crisp[i] + 1);
            for (int v = 0; v < cc.k; ++v) os << ',' << csv::format_double(fuzzy.membership(i, v));
            os << '\n';
        }
        write_text(out_dir / files::kMemberships, os.str());
    }
    {
        std::ostringstream os;
        os << "id,cluster,neighbor,width\n";
        for (std::size_t i = 0; i < ids.size(); ++i) {
            os << ids[i] << ',' << (fuzzy.crisp[i] + 1) << ',' << (sil.neighbor[i] + 1) << ','
               << csv::format_double(sil.widths[i]) << '\n';
        }
        write_text(out_dir / files::kSilhouette, os.str());
    }
    write_text(out_dir / files::kClusterReport,
               pdclust::cluster_report_json(cc, info, fuzzy, sil, report, medoids, pam_sil));
    return kExitOk;
}

int cmd_heatmap(const RunConfig& config, std::ostream& err) {
    if (config.from_s && config.to_s && *config.from_s > *config.to_s) throw UsageError("--from is after --to");
    const auto matches = load_matches(config, false, err);
    const auto grid = visit_counts(matches, config.from_s, config.to_s, config.player);
    const std::uint64_t peak = *std::max_element(grid.begin(), grid.end());

    std::ostringstream os;
    Pixmap image;
    image.width = kGridSize;
    image.height = kGridSize;
    image.maxval = 255;
    image.pixels.reserve(grid.size());
    for (int row = 0; row < kGridSize; ++row) {
        const int y = kMaxCellIndex - row;
        for (int x = 0; x < kGridSize; ++x) {
            const std::uint64_t c = grid[GridCell(x, y).index()];
            os << (x == 0 ? "" : ",") << c;
            const std::uint8_t level =
                peak == 0 ? 0 : static_cast<std::uint8_t>(std::lround(255.0 * static_cast<double>(c) / static_cast<double>(peak)));
            image.pixels.push_back({level, level, level});
        }
        os << '\n';
    }
    const auto out_dir = prepare_out_dir(config);
    write_text(out_dir / files::kHeatmapCsv, os.str());
    write_bytes(out_dir / files::kHeatmapPpm, write_ppm(image));
    return kExitOk;
}

int cmd_synth(const RunConfig& config, std::ostream& err) {
    const auto map = load_zone_map(config);
    std::vector<SkillTier> tiers;
    if (config.tier) {
        tiers.push_back(*config.tier);
    } else {
        tiers.assign(kSkillTiers.begin(), kSkillTiers.end());
    }

    struct Job {
        MatchId id;
        synth::RegimeParams params;
        SkillTier tier;
    };
    std::vector<Job> jobs;
    MatchId next_id = 1;
    for (const SkillTier tier : tiers) {
        auto params = synth::regime_for_tier(tier, config.length_s);
        if (config.spread_sigma) params.spread_sigma = *config.spread_sigma;
        if (config.switch_rate) params.switch_rate = *config.switch_rate;
        for (int i = 0; i < config.count; ++i) jobs.push_back({next_id++, params, tier});
    }

    std::vector<synth::SynthMatch> out(jobs.size());
    try {
        parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
            const auto& job = jobs[i];
            const std::uint64_t seed = config.seed ^ (job.id * 0x9E3779B97F4A7C15ULL);
            out[i] = synth::generate_match(job.params, job.params, map, seed, {job.id, job.tier, std::nullopt});
        });
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto out_dir = prepare_out_dir(config);
    std::vector<MatchMeta> meta;
    for (const auto& m : out) {
        write_bytes(out_dir / (match_file_stem(m.meta.match_id) + ".dtl2"), m.stream);
        meta.push_back(m.meta);
    }
    std::ostringstream os;
    write_metadata_csv(os, meta);
    write_text(out_dir / files::kMetadata, os.str());
    err << "wrote " << out.size() << " matches to " << out_dir.string() << '\n';
    return kExitOk;
}

int cmd_zonemap_draft(const RunConfig& config, std::ostream& err) {
    const ZoneMap map = config.reference ? reference_zone_map() : draft_zone_map(load_matches(config, false, err));
    const auto out_dir = prepare_out_dir(config);
    write_bytes(out_dir / files::kZonesPpm, write_ppm(map.render()));
    write_text(out_dir / files::kZonesLegend, map.legend().to_text());
    return kExitOk;
}

namespace {

struct SubcommandSpec {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&);
    std::vector<const char*> options;
};

struct OptionHelp {
    const char* key;
    const char* help;
};

constexpr OptionHelp kOptionHelp[] = {
    {"meta", "Metadata CSV (match_id,tier,winner,duration_s)"},
    {"map", "Zone map PPM (128x128); defaults to the built-in map"},
    {"legend", "Zone legend file; defaults to the standard legend"},
    {"out", "Output directory"},
    {"min-dwell", "Minimum zone dwell in seconds"},
    {"window", "Moving-average window in seconds"},
    {"k", "Number of clusters"},
    {"r", "Membership exponent"},
    {"m", "Embedding dimension in [2,7] or 'auto'"},
    {"delay", "Embedding delay"},
    {"seed", "Random seed"},
    {"workers", "Worker threads"},
    {"from", "First second included"},
    {"to", "Last second included"},
    {"tier", "Skill tier (Normal, High, VeryHigh, Professional)"},
    {"player", "Restrict to one player id"},
    {"count", "Matches per tier"},
    {"length", "Match length in seconds"},
    {"spread", "Override team spread (cells)"},
    {"switch-rate", "Override zone changes per minute"},
};

const char* help_for(const char* key) {
    for (const auto& h : kOptionHelp) {
        if (std::string_view(h.key) == key) return h.help;
    }
    return "";
}

const std::vector<SubcommandSpec>& subcommands() {
    static const std::vector<SubcommandSpec> specs = {
        {"ingest", "Decode DTL2 streams into trajectory CSVs", cmd_ingest, {"meta", "out", "workers"}},
        {"zones", "Per-player zone-change rates", cmd_zones, {"meta", "map", "legend", "out", "min-dwell", "workers"}},
        {"distance", "Per-second intra-team distance", cmd_distance, {"meta", "out", "window", "workers"}},
        {"phases", "Distance aggregated by tier, outcome and phase", cmd_phases, {"meta", "out", "window", "tier", "workers"}},
        {"anova", "One-way ANOVA of the measures by tier and outcome", cmd_anova,
         {"meta", "map", "legend", "out", "min-dwell", "window", "workers"}},
        {"cluster", "Permutation-distribution clustering of distance series", cmd_cluster,
         {"meta", "out", "window", "k", "r", "m", "delay", "seed", "workers"}},
        {"heatmap", "Visit-count grid and grayscale image", cmd_heatmap, {"meta", "out", "from", "to", "player", "workers"}},
        {"synth", "Generate synthetic matches", cmd_synth,
         {"map", "legend", "out", "count", "length", "tier", "seed", "spread", "switch-rate", "workers"}},
        {"zonemap-draft", "Draft a zone map from visited cells", cmd_zonemap_draft, {"meta", "out", "workers"}},
    };
    return specs;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Match trajectory analysis"};
    app.name("mobatrack");
    app.require_subcommand(1);

    struct Bound {
        CLI::App* app;
        const SubcommandSpec* spec;
        std::string config_file;
        std::vector<std::string> inputs;
        std::map<std::string, std::string> values;
        bool reference = false;
    };
    std::vector<Bound> bound(subcommands().size());
    for (std::size_t i = 0; i < subcommands().size(); ++i) {
        const auto& spec = subcommands()[i];
        auto& b = bound[i];
        b.spec = &spec;
        b.app = app.add_subcommand(spec.name, spec.help);
        b.app->add_option("--config", b.config_file, "key=value settings file");
        if (std::string_view(spec.name) != "synth") b.app->add_option("inputs", b.inputs, "Input files or directories");
        if (std::string_view(spec.name) == "zonemap-draft") b.app->add_flag("--reference", b.reference, "Write the built-in map");
        for (const char* key : spec.options) {
            b.app->add_option(std::string("--") + key, b.values[key], help_for(key));
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    for (const auto& b : bound) {
        if (!b.app->parsed()) continue;
        try {
            RunConfig config;
            if (!b.config_file.empty()) config.load_file(b.config_file);
            config.apply_environment();
            if (!b.inputs.empty()) config.inputs.clear();
            for (const auto& in : b.inputs) config.apply("input", in);
            if (b.reference) config.apply("reference", "true");
            for (const char* key : b.spec->options) {
                if (b.app->get_option(std::string("--") + key)->count() > 0) config.apply(key, b.values.at(key));
            }
            return b.spec->fn(config, err);
        } catch (const UsageError& e) {
            err << "usage error: " << e.what() << '\n';
            return kExitUsage;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitDataError;
        }
    }
    return kExitUsage;
}

}  // namespace mobatrack::cli
