#include <benchmark/benchmark.h>

#include "qcreg/learn.hpp"
#include "qcreg/rng.hpp"

namespace {

qcreg::TrainingSet monotone_corpus(std::size_t dim, std::size_t m)
{
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(5);
    qcreg::TrainingSet ts;
    for (std::size_t i = 0; i < m; ++i) {
        qcreg::TrainingPair pr;
        pr.clean.resize(dim);
        pr.noisy.resize(dim);
        for (std::size_t g = 0; g < dim; ++g) {
            double f = rng.next_range(0.1, 1.2);
            pr.clean[g] = f;
            pr.noisy[g] = f + 0.3;
        }
        ts.push_back(std::move(pr));
    }
    return ts;
}

void BM_learn_discrete(benchmark::State& state)
{
    qcreg::TrainingSet ts = monotone_corpus(static_cast<std::size_t>(state.range(0)), 4);
    qcreg::GridSpec grid(0, 2, 3);
    qcreg::SolverConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(qcreg::learn_discrete(ts, grid, cfg));
}
BENCHMARK(BM_learn_discrete)->Arg(4)->Arg(16);

void BM_project_quasiconvex(benchmark::State& state)
{
    qcreg::CounterRng rng = qcreg::CounterRng::from_seed(6);
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (double& v : x)
        v = rng.next_range(-1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(qcreg::project_quasiconvex(x));
}
BENCHMARK(BM_project_quasiconvex)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
