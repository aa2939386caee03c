#include <benchmark/benchmark.h>

#include "qcreg/mra.hpp"
#include "qcreg/rng.hpp"

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed)
{
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(seed);
    std::vector<double> x(n);
    for (double& v : x)
        v = rng.next_range(0.0, 1.0);
    return x;
}

void BM_decompose(benchmark::State& state)
{
    std::vector<double> x = random_signal(static_cast<std::size_t>(state.range(0)), 1);
    qcreg::ScalingFilter f = qcreg::ScalingFilter::db4();
    for (auto _ : state)
        benchmark::DoNotOptimize(qcreg::decompose(x, f, 3));
}
BENCHMARK(BM_decompose)->Arg(64)->Arg(1024)->Arg(16384);

void BM_roundtrip(benchmark::State& state)
{
    std::vector<double> x = random_signal(static_cast<std::size_t>(state.range(0)), 2);
    qcreg::ScalingFilter f = qcreg::ScalingFilter::db4();
    for (auto _ : state) {
        qcreg::Pyramid p = qcreg::decompose(x, f, 3);
        benchmark::DoNotOptimize(qcreg::reconstruct(p, f));
    }
}
BENCHMARK(BM_roundtrip)->Arg(64)->Arg(1024);

}  // namespace
