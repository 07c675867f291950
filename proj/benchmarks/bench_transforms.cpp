#include "tfsst/estimate.hpp"
#include "tfsst/ridge.hpp"
#include "tfsst/squeeze.hpp"
#include "tfsst/stft.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace tfsst;

namespace {

Signal chirp(std::size_t n, double fs) {
    Signal s;
    s.sample_rate = fs;
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = i / fs;
        s.samples[i] = cplx{std::cos(2 * M_PI * (34 * t + 32 * t * t)), 0.0};
    }
    return s;
}

void BM_AdaptiveStft(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    Signal s = chirp(n, static_cast<double>(n));
    auto sigma = TimeVaryingParam::constant(0.05, n);
    for (auto _ : state) {
        TFMatrix tf = adaptive_stft(s, sigma, WindowKind::G);
        benchmark::DoNotOptimize(tf.values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_AdaptiveStft)->Arg(256)->Arg(512)->Arg(1024);

void BM_SecondOrderSqueeze(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    Signal s = chirp(n, static_cast<double>(n));
    auto sigma = TimeVaryingParam::constant(0.05, n);
    for (auto _ : state) {
        SstResult sst = compute_sst(s, sigma, SstVariant::AdpFsst2);
        benchmark::DoNotOptimize(sst.energy.data());
    }
}
BENCHMARK(BM_SecondOrderSqueeze)->Arg(256)->Arg(512);

void BM_RidgeExtraction(benchmark::State& state) {
    Signal s = synth(two_chirp_components(), 256.0, 1.0);
    SstResult sst =
        compute_sst(s, TimeVaryingParam::constant(0.03, s.size()), SstVariant::AdpFsst2);
    for (auto _ : state) {
        RidgeSet rs = extract_ridges(sst, 2, 15);
        benchmark::DoNotOptimize(rs.ridges.data());
    }
}
BENCHMARK(BM_RidgeExtraction);

void BM_WidthSelection(benchmark::State& state) {
    Signal s = synth(two_chirp_components(), 256.0, 1.0);
    EstimatorConfig cfg;
    cfg.sigma_max = 0.1;
    cfg.sigma_min = 0.02;
    cfg.sigma_step = 0.004;
    for (auto _ : state) {
        WindowSelector sel(s, cfg);
        auto track = sel.algorithm1();
        benchmark::DoNotOptimize(track.data());
    }
}
BENCHMARK(BM_WidthSelection);

}  // namespace

BENCHMARK_MAIN();
