// Microbenchmarks for the evaluation and training hot paths, sized like the
// default experiment configurations so the numbers transfer.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "chanlearn/geometry.hpp"
#include "chanlearn/gibbs.hpp"
#include "chanlearn/loss.hpp"
#include "chanlearn/mi.hpp"
#include "chanlearn/noise.hpp"
#include "chanlearn/rng.hpp"
#include "chanlearn/sgd.hpp"

namespace {

using namespace chanlearn;

Codebook bench_codebook(int m, int d, Rng& rng) {
    Mat X(d, m);
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < d; ++q) X(q, p) = rng.normal();
    }
    return Codebook(X);
}

NoiseBatch bench_noise(int d, int n, double scale, Rng& rng) {
    Mat Z(d, n);
    for (int i = 0; i < n; ++i) {
        for (int q = 0; q < d; ++q) Z(q, i) = scale * rng.normal();
    }
    return NoiseBatch(std::move(Z));
}

void BM_EmpiricalPe(benchmark::State& state) {
    Rng rng(11);
    const Codebook C = bench_codebook(32, 2, rng);
    const DecoderMatrix S = DecoderMatrix::identity(2);
    const NoiseBatch Z = bench_noise(2, 10000, 0.7, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(empirical_pe(C, S, Z));
    }
}
BENCHMARK(BM_EmpiricalPe);

void BM_SelectActiveSet(benchmark::State& state) {
    Rng rng(12);
    const Codebook C = bench_codebook(32, 2, rng);
    const DecoderMatrix S = DecoderMatrix::identity(2);
    const NoiseBatch Z = bench_noise(2, 1000, 0.7, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_active_set(C, S, Z));
    }
}
BENCHMARK(BM_SelectActiveSet);

void BM_SgdPass(benchmark::State& state) {
    Rng rng(13);
    const Codebook C0 = bench_codebook(32, 2, rng);
    const NoiseBatch train = bench_noise(2, 2000, 0.7, rng);
    SgdConfig cfg;
    cfg.r_x = 3.0;
    cfg.n_iters = 2000;
    cfg.record_every = 2000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sgd_run(C0, DecoderMatrix::identity(2), train, nullptr, cfg));
    }
}
BENCHMARK(BM_SgdPass);

void BM_BuildPairwiseArray(benchmark::State& state) {
    Rng rng(14);
    const Codebook C = bench_codebook(64, 4, rng);
    const DecoderMatrix S = DecoderMatrix::identity(4);
    const NoiseBatch Z = bench_noise(4, 100, 2.0, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_pairwise_error_array(C, S, Z));
    }
}
BENCHMARK(BM_BuildPairwiseArray);

void BM_PeFromArray(benchmark::State& state) {
    Rng rng(15);
    const Codebook C = bench_codebook(64, 4, rng);
    const DecoderMatrix S = DecoderMatrix::identity(4);
    const NoiseBatch Z = bench_noise(4, 100, 2.0, rng);
    const PairwiseErrorArray arr = build_pairwise_error_array(C, S, Z);
    PeWorkspace ws(arr.n);
    std::vector<std::int32_t> surviving(64);
    for (int j = 0; j < 64; ++j) surviving[j] = j;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pe_from_array(arr, surviving, ws));
    }
}
BENCHMARK(BM_PeFromArray);

void BM_GibbsStep(benchmark::State& state) {
    Rng rng(16);
    const Codebook C = bench_codebook(64, 4, rng);
    const DecoderMatrix S = DecoderMatrix::identity(4);
    const NoiseBatch Z = bench_noise(4, 100, 2.0, rng);
    const PairwiseErrorArray arr = build_pairwise_error_array(C, S, Z);
    PeWorkspace ws(arr.n);
    std::vector<std::int32_t> surviving(64);
    for (int j = 0; j < 64; ++j) surviving[j] = j;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gibbs_step(arr, surviving, 1, 1000.0, rng, ws));
    }
}
BENCHMARK(BM_GibbsStep);

void BM_KdeLogDensity(benchmark::State& state) {
    Rng rng(17);
    KdeModel model;
    model.centers = bench_noise(2, 2000, 1.0, rng).samples;
    model.theta = 0.25;
    model.kernel = Kernel::kGaussian;
    Vec y(2);
    y << 0.3, -0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kde_log_density(model, y));
    }
}
BENCHMARK(BM_KdeLogDensity);

void BM_MixtureEntropyMc(benchmark::State& state) {
    Rng rng(18);
    Vec mu0(2), mu1(2);
    mu0 << 0.0, 0.0;
    mu1 << 3.0, 1.0;
    const Mat cov = Mat::Identity(2, 2);
    const std::vector<MixtureComponent> comps = {gaussian_component(mu0, cov),
                                                 gaussian_component(mu1, cov)};
    const std::vector<double> weights = {0.5, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mixture_entropy_mc(comps, weights, 2000, rng));
    }
}
BENCHMARK(BM_MixtureEntropyMc);

}  // namespace

BENCHMARK_MAIN();
