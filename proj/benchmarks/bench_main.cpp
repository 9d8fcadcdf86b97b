#include <random>

#include <benchmark/benchmark.h>

#include "cavrec/dissipation.hpp"
#include "cavrec/metrics.hpp"
#include "cavrec/recovery.hpp"

namespace {

cavrec::DensityMatrix random_density(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    cavrec::Matrix g(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            g(n, m) = cavrec::complexd(normal(rng), normal(rng));
        }
    }
    cavrec::Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return cavrec::DensityMatrix(std::move(rho));
}

void BM_Dissipate(benchmark::State& state) {
    const auto rho = random_density(static_cast<int>(state.range(0)), 17);
    const cavrec::DampingSpec spec(0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cavrec::dissipate(rho, spec));
    }
}
BENCHMARK(BM_Dissipate)->Arg(4)->Arg(8)->Arg(16);

void BM_ApplyCm(benchmark::State& state) {
    const auto rho = random_density(static_cast<int>(state.range(0)), 23);
    const cavrec::CmParams params{cavrec::AtomState(1.0, 2.0),
                                  cavrec::AtomState(0.7, 5.0),
                                  cavrec::JcTime(12.5)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cavrec::apply_cm(rho, params));
    }
}
BENCHMARK(BM_ApplyCm)->Arg(2)->Arg(4)->Arg(8);

void BM_QGrid(benchmark::State& state) {
    const auto rho = random_density(3, 31);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cavrec::q_grid(rho, 3.0, 0.05));
    }
}
BENCHMARK(BM_QGrid);

void BM_OptimizeCm(benchmark::State& state) {
    const auto target = random_density(2, 41);
    const auto damped = cavrec::dissipate(target, cavrec::DampingSpec(0.3));
    cavrec::OptimizerConfig cfg;
    cfg.coarse_grid = {4, 4, 4, 4, 16};
    cfg.restarts = 4;
    cfg.max_iters = 60;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cavrec::optimize_cm(damped, target, cfg));
    }
}
BENCHMARK(BM_OptimizeCm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
