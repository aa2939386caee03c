#include <benchmark/benchmark.h>

#include "qcreg/rng.hpp"
#include "qcreg/shrink.hpp"

namespace {

void BM_shrink_single_p1(benchmark::State& state)
{
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(1);
    for (auto _ : state) {
        double b = rng.next_range(-3.0, 3.0);
        benchmark::DoNotOptimize(qcreg::shrink_single(b, 0.5, 1.0));
    }
}
BENCHMARK(BM_shrink_single_p1);

void BM_shrink_single_p15(benchmark::State& state)
{
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(2);
    for (auto _ : state) {
        double b = rng.next_range(-3.0, 3.0);
        benchmark::DoNotOptimize(qcreg::shrink_single(b, 0.5, 1.5));
    }
}
BENCHMARK(BM_shrink_single_p15);

void BM_shrink_multi_mixed(benchmark::State& state)
{
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(3);
    std::vector<qcreg::ScalarTerm> terms = {{0.3, 1.0}, {0.5, 1.5}, {0.2, 2.0}};
    for (auto _ : state) {
        double b = rng.next_range(-3.0, 3.0);
        benchmark::DoNotOptimize(qcreg::shrink_multi(b, terms));
    }
}
BENCHMARK(BM_shrink_multi_mixed);

void BM_denoise_identity(benchmark::State& state)
{
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(4);
    qcreg::CoeffVec g(dim);
    for (double& v : g)
        v = rng.next_range(-2.0, 2.0);
    qcreg::MultiPenalty pen;
    pen.terms.push_back({0.2, std::vector<double>(dim, 1.0), 1.0});
    pen.terms.push_back({0.1, std::vector<double>(dim, 1.0), 2.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(qcreg::denoise_identity(g, pen));
}
BENCHMARK(BM_denoise_identity)->Arg(64)->Arg(1024);

}  // namespace
