#include <benchmark/benchmark.h>

#include "fpr/denoise.hpp"
#include "fpr/eval.hpp"
#include "fpr/red.hpp"
#include "fpr/rng.hpp"
#include "fpr/sim.hpp"
#include "fpr/solvers.hpp"

using namespace fpr;

namespace {

ImagePlane bench_image(int side) {
    SplitMix64 rng(7);
    ImagePlane img = ImagePlane::zeros(side);
    for (double& v : img.values) v = rng.uniform(0.0, 255.0);
    return img;
}

struct BenchInstance {
    OversamplingMap map;
    ImagePlane truth;
    Measurement meas;
    ComplexField xt;
    ConstraintSet support;
    SolverState state;
};

BenchInstance make_instance(int side) {
    BenchInstance b{OversamplingMap(side, 2), bench_image(side), {}, {}, {}, {}};
    b.meas = synthesize_measurement(b.truth, b.map, NoiseModel{4.0, 1});
    b.xt = embed(bench_image(side), b.map);
    b.support = ConstraintSet::padded_block(b.map);
    b.state = make_initial_state(b.xt, b.map);
    return b;
}

void BM_dft2(benchmark::State& state) {
    const ComplexField v = embed(bench_image(static_cast<int>(state.range(0))),
                                 OversamplingMap(static_cast<int>(state.range(0)), 2));
    for (auto _ : state) benchmark::DoNotOptimize(dft2(v));
}
BENCHMARK(BM_dft2)->Arg(32)->Arg(64)->Arg(128);

void BM_project_measurement(benchmark::State& state) {
    const BenchInstance b = make_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(project_measurement(b.xt, b.meas));
}
BENCHMARK(BM_project_measurement)->Arg(32)->Arg(64);

void BM_hio_step(benchmark::State& state) {
    const BenchInstance b = make_instance(static_cast<int>(state.range(0)));
    ComplexField cur = b.xt;
    for (auto _ : state) {
        cur = hio_step(cur, b.meas, b.support, 0.9);
        benchmark::DoNotOptimize(cur);
    }
}
BENCHMARK(BM_hio_step)->Arg(32)->Arg(64);

void BM_tv_denoiser(benchmark::State& state) {
    const ImagePlane img = bench_image(static_cast<int>(state.range(0)));
    const DenoiserSpec tv = DenoiserSpec::tv(14.0, 30);
    for (auto _ : state) benchmark::DoNotOptimize(apply_denoiser(img, tv));
}
BENCHMARK(BM_tv_denoiser)->Arg(32)->Arg(128);

void BM_red_ita_s_step(benchmark::State& state) {
    BenchInstance b = make_instance(static_cast<int>(state.range(0)));
    RedParams red;
    red.lambda = 0.4;
    red.constraint = ConstraintSet::nonneg();
    red.denoiser = DenoiserSpec::tv(14.0, 30);
    SolverState cur = b.state;
    for (auto _ : state) {
        cur = red_ita_s_step(cur, b.meas, b.map, 0.2, red);
        benchmark::DoNotOptimize(cur);
    }
}
BENCHMARK(BM_red_ita_s_step)->Arg(32)->Arg(64);

void BM_ssim(benchmark::State& state) {
    const ImagePlane a = bench_image(static_cast<int>(state.range(0)));
    const ImagePlane b = bench_image(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_ssim)->Arg(32)->Arg(128);

void BM_align_to_truth(benchmark::State& state) {
    const ImagePlane truth = bench_image(static_cast<int>(state.range(0)));
    ImagePlane cand = truth;
    std::rotate(cand.values.begin(), cand.values.begin() + 5, cand.values.end());
    for (auto _ : state) benchmark::DoNotOptimize(align_to_truth(cand, truth));
}
BENCHMARK(BM_align_to_truth)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
