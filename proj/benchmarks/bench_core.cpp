#include <benchmark/benchmark.h>

#include "ofdmse/channel.hpp"
#include "ofdmse/loading.hpp"
#include "ofdmse/systems.hpp"

using namespace ofdmse;

namespace {

SnrGrid sample_snr(double snr_db) {
    Engine rng = make_engine(1, {});
    return snr_grid(draw_realization(tux_profile(), 128, 12, 7, 0, rng), noise_var_for_db(snr_db));
}

void BM_Ber(benchmark::State& state) {
    const Scheme s = catalog()[static_cast<std::size_t>(state.range(0))];
    double g = 3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ber(s, g));
        g = g < 1000.0 ? g * 1.01 : 3.0;
    }
    state.SetLabel(to_string(s));
}
BENCHMARK(BM_Ber)->Arg(5)->Arg(7)->Arg(8)->Arg(11)->Arg(12)->Arg(3);

void BM_BerTable(benchmark::State& state) {
    const SnrGrid snr = sample_snr(20.0);
    for (auto _ : state) benchmark::DoNotOptimize(BerTable(snr));
}
BENCHMARK(BM_BerTable);

void BM_Greedy(benchmark::State& state) {
    const BerTable table(sample_snr(static_cast<double>(state.range(0))));
    const auto fb = build_profile(SystemKind::FB);
    for (auto _ : state) benchmark::DoNotOptimize(greedy_allocate(table, fb.grid, 1e-3));
}
BENCHMARK(BM_Greedy)->Arg(0)->Arg(20)->Arg(40);

void BM_Realization(benchmark::State& state) {
    Engine rng = make_engine(2, {});
    const ChannelProfile p = tux_profile();
    for (auto _ : state) benchmark::DoNotOptimize(draw_realization(p, 128, 12, 7, 0, rng));
}
BENCHMARK(BM_Realization);

}  // namespace

BENCHMARK_MAIN();
