#include "burgers/config.hpp"
#include "burgers/diagnostics.hpp"
#include "burgers/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace burgers;

TrajectoryConfig white_config(std::size_t n) {
    TrajectoryConfig cfg;
    cfg.nu = 4.0 / static_cast<double>(n);
    cfg.grid = Grid(n);
    cfg.forcing.kind = WhiteForcing{SpectralAmplitudes::exponential()};
    cfg.forcing.seed = 7;
    return cfg;
}

void BM_Advance(benchmark::State& state) {
    const auto cfg = white_config(static_cast<std::size_t>(state.range(0)));
    Stepper stepper(cfg);
    const Field u0 = random_smooth_field(cfg.grid, 1, 0);
    std::vector<Complex> uhat(u0.spectral().begin(), u0.spectral().end());
    EnergyBudget budget;
    for (auto _ : state) {
        auto work = uhat;
        benchmark::DoNotOptimize(stepper.advance(work, 1e-5, budget));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Advance)->RangeMultiplier(2)->Range(1024, 16384)->Complexity(benchmark::oNLogN);

void BM_WhiteIncrement(benchmark::State& state) {
    const auto cfg = white_config(4096);
    Stepper stepper(cfg);
    const NoiseStream stream(cfg.forcing.seed, 0);
    std::vector<Complex> uhat(cfg.grid.modes());
    EnergyBudget budget;
    std::uint64_t step = 0;
    for (auto _ : state) stepper.add_white(uhat, step++, 1e-5, stream, budget);
}
BENCHMARK(BM_WhiteIncrement);

void BM_Record(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Field u = random_smooth_field(Grid(n), 1, 0);
    const TrajectoryState s{0.0, u};
    const auto layout = DiagnosticsLayout::standard(n);
    for (auto _ : state) benchmark::DoNotOptimize(make_record(s, 0, layout));
}
BENCHMARK(BM_Record)->Arg(2048)->Arg(8192);

}  // namespace
