#include "burgers/fft.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

void BM_Forward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> in(n);
    for (std::size_t j = 0; j < n; ++j) in[j] = std::sin(0.37 * static_cast<double>(j));
    std::vector<burgers::Complex> out(n / 2 + 1);
    for (auto _ : state) {
        burgers::fft::forward(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Forward)->RangeMultiplier(4)->Range(256, 32768)->Complexity(benchmark::oNLogN);

void BM_Inverse(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<burgers::Complex> in(n / 2 + 1);
    for (std::size_t k = 1; k < in.size(); ++k) in[k] = {1.0 / static_cast<double>(k), 0.5 / static_cast<double>(k)};
    std::vector<double> out(n);
    for (auto _ : state) {
        burgers::fft::inverse(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Inverse)->RangeMultiplier(4)->Range(256, 32768)->Complexity(benchmark::oNLogN);

}  // namespace
