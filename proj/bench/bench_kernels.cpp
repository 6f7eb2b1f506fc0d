// Serial reference vs OpenMP kernels. Arg(0) = serial, Arg(1) = parallel.

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "oulab/config.hpp"
#include "oulab/estimation.hpp"
#include "oulab/kernels.hpp"

using namespace oulab;
namespace k = oulab::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    return v;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_synthesize(benchmark::State& state)
{
    const std::size_t K = 64, G = 4096;
    const auto c = random_vector(K, 1), d = random_vector(K, 2);
    std::vector<double> out(G);
    for (auto _ : state) {
        if (state.range(0)) k::omp::synthesize(0.5, c, d, out);
        else k::serial::synthesize(0.5, c, d, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_project(benchmark::State& state)
{
    const std::size_t K = 64, G = 4096;
    const auto values = random_vector(G, 3);
    std::vector<double> c(K), d(K);
    double c0 = 0;
    for (auto _ : state) {
        if (state.range(0)) k::omp::project(values, c0, c, d);
        else k::serial::project(values, c0, c, d);
        benchmark::DoNotOptimize(c.data());
    }
}

void BM_column_mean(benchmark::State& state)
{
    std::vector<std::vector<double>> rows;
    std::vector<const double*> ptrs;
    for (unsigned r = 0; r < 1000; ++r) rows.push_back(random_vector(200, r));
    for (const auto& r : rows) ptrs.push_back(r.data());
    std::vector<double> out(200);
    for (auto _ : state) {
        if (state.range(0)) k::omp::column_mean(ptrs, out);
        else k::serial::column_mean(ptrs, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_sample_batch(benchmark::State& state)
{
    auto cfg = load_config("ex42").scenario;
    cfg.n = 10000;
    cfg.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sample_batch(cfg, exec_of(state)).eta.data());
    state.SetItemsProcessed(state.iterations() * cfg.n);
}

void BM_consistency(benchmark::State& state)
{
    auto cfg = load_config("ex42").scenario;
    cfg.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(consistency_experiment(cfg, {100, 1000}, 20, exec_of(state)).slope);
}

}  // namespace

BENCHMARK(BM_synthesize)->Arg(0)->Arg(1);
BENCHMARK(BM_project)->Arg(0)->Arg(1);
BENCHMARK(BM_column_mean)->Arg(0)->Arg(1);
BENCHMARK(BM_sample_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_consistency)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
