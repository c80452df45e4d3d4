#include <benchmark/benchmark.h>

#include <random>

#include "isar/conv.hpp"
#include "isar/lowrank.hpp"
#include "isar/radar.hpp"
#include "isar/sampling.hpp"
#include "isar/svd.hpp"

namespace {

isar::Scene make_scene(std::size_t n) {
    isar::Scene s;
    s.params.n_angle = n;
    s.params.n_freq = n;
    s.scatterers = {{n / 4, n / 4, {1.0, 0.0}},
                    {n / 2, n / 3, {0.5, 0.5}},
                    {3 * n / 4, n / 2, {0.0, 1.0}}};
    return s;
}

void bm_rd_image(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto echo = isar::simulate_echo(make_scene(n));
    for (auto _ : state) benchmark::DoNotOptimize(isar::rd_image(echo));
}
BENCHMARK(bm_rd_image)->Arg(64)->Arg(128)->Arg(256);

void bm_svd(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto echo = isar::simulate_echo(make_scene(n));
    for (auto _ : state) benchmark::DoNotOptimize(isar::svd(echo));
}
BENCHMARK(bm_svd)->Arg(16)->Arg(32)->Arg(64);

void bm_conv_forward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    isar::ConvLayer layer(16, 16, 1, isar::PadMode::reflect);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (auto& w : layer.weights) w = u(rng);
    isar::Tensor3 x(16, n, n);
    for (auto& v : x.data) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(isar::conv2d_forward(x, layer));
}
BENCHMARK(bm_conv_forward)->Arg(32)->Arg(64);

void bm_nnm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    isar::RealMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.at(r, c) = double(r + 1) * double(c + 1);
    const auto mask = isar::gen_mask(isar::MaskKind::pixel, 0.5, n, n, 1);
    isar::SolverConfig cfg;
    cfg.max_iters = 500;
    for (auto _ : state) benchmark::DoNotOptimize(isar::complete_nnm(isar::apply_mask(m, mask), mask, cfg));
}
BENCHMARK(bm_nnm)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
