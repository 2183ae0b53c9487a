#include "mobatrack/measures.hpp"
#include "mobatrack/pdclust.hpp"
#include "mobatrack/synth.hpp"
#include "mobatrack/tickstream.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mobatrack;

namespace {

std::vector<std::vector<double>> random_walks(std::size_t count, std::size_t length) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> out(count);
    for (auto& s : out) {
        double v = 0.0;
        for (std::size_t t = 0; t < length; ++t) s.push_back(v += g(rng));
    }
    return out;
}

void BM_PermDistribution(benchmark::State& state) {
    const auto series = random_walks(1, static_cast<std::size_t>(state.range(0)));
    const int m = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(pdclust::perm_distribution(series[0], m));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PermDistribution)->ArgsProduct({{3000, 6000, 12000}, {3, 5, 7}});

void BM_DistanceMatrix(benchmark::State& state) {
    const auto series = random_walks(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(pdclust::distance_matrix(series, 5));
}
BENCHMARK(BM_DistanceMatrix)->Args({380, 3000})->Args({380, 6000})->Unit(benchmark::kMillisecond);

void BM_Fanny(benchmark::State& state) {
    const auto d = pdclust::distance_matrix(random_walks(static_cast<std::size_t>(state.range(0)), 1000), 5);
    for (auto _ : state) benchmark::DoNotOptimize(pdclust::fanny(d, 3));
}
BENCHMARK(BM_Fanny)->Arg(100)->Arg(380)->Unit(benchmark::kMillisecond);

void BM_TeamDistance(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> c(0, kMaxCellIndex);
    std::vector<GridCell> team;
    for (int i = 0; i < kPlayersPerTeam; ++i) team.emplace_back(c(rng), c(rng));
    for (auto _ : state) benchmark::DoNotOptimize(measures::team_distance(team));
}
BENCHMARK(BM_TeamDistance);

void BM_SynthDecode(benchmark::State& state) {
    const auto map = reference_zone_map();
    const auto params = synth::regime_for_tier(SkillTier::High, static_cast<Seconds>(state.range(0)));
    const auto match = synth::generate_match(params, params, map, 3);
    for (auto _ : state) benchmark::DoNotOptimize(tickstream::decode(match.stream));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(match.stream.size()));
}
BENCHMARK(BM_SynthDecode)->Arg(1800)->Arg(3600);

}  // namespace

BENCHMARK_MAIN();
