// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "foliate/learning.hpp"
#include "foliate/maml.hpp"
#include "foliate/proto.hpp"

using namespace foliate;

namespace {

void bench_scan_leaf(benchmark::State& state, Exec exec) {
    QuadraticMamlSetup setup;
    setup.eps = 0.01;
    setup.k = 0.25 * std::log(100.0);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const LeafReport rep = scan_leaf(setup, n, 1e-3, exec);
        benchmark::DoNotOptimize(rep.numeric_losses.data());
    }
}

void bench_loss_ball(benchmark::State& state, Exec exec) {
    const LossSurface L = quadratic_loss();
    const LearnerMap learner = exact_quadratic_learner();
    Rng rng(1);
    std::vector<TaskPoint> grid;
    for (int i = 0; i < state.range(0); ++i)
        grid.push_back(TaskPoint{rng.uniform_vec(2, -1.0, 1.0)});
    const TaskPoint t{{0.0, 0.0}};
    for (auto _ : state) {
        const auto members = loss_ball(L, learner, t, 0.25, grid, exec);
        benchmark::DoNotOptimize(members.data());
    }
}

void bench_train_step(benchmark::State& state, Exec exec) {
    Rng rng(2);
    const Embedding e0 = make_embedding({1, static_cast<int>(state.range(0)), 2}, rng);
    Rng data(3);
    const Episode ep = make_toy_episode(data);
    const Metric m = squared_euclidean_metric();
    for (auto _ : state) {
        const Embedding out = train_embedding(e0, {ep}, 1, 0.5, m, nullptr, exec);
        benchmark::DoNotOptimize(out.params.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(bench_scan_leaf, serial, Exec::serial)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(bench_scan_leaf, parallel, Exec::parallel)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(bench_loss_ball, serial, Exec::serial)->Arg(10000);
BENCHMARK_CAPTURE(bench_loss_ball, parallel, Exec::parallel)->Arg(10000);
BENCHMARK_CAPTURE(bench_train_step, serial, Exec::serial)->Arg(8)->Arg(32);
BENCHMARK_CAPTURE(bench_train_step, parallel, Exec::parallel)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
