#include <benchmark/benchmark.h>

#include "relaxcycle/cycle.hpp"
#include "relaxcycle/equilibria.hpp"
#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"

namespace {

using namespace relaxcycle;

ModelParams reference() {
    return ModelParams{}; // defaults are the reference cyclic set
}

void BM_RhsEroei(benchmark::State& state) {
    const ModelParams p = reference();
    StateNE y{0.7, 2.2, 0.0};
    for (auto _ : state) {
        const Derivatives d = rhs_eroei(p, y);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_RhsEroei);

void BM_CubicEquilibria(benchmark::State& state) {
    const ModelParams p = reference();
    double s = 0.39;
    for (auto _ : state) {
        const EquilibriumSet es = budworm_equilibria(p, s);
        benchmark::DoNotOptimize(es);
        s = s < 0.55 ? s + 1e-4 : 0.39; // walk the bistable window
    }
}
BENCHMARK(BM_CubicEquilibria);

void BM_FoldPoints(benchmark::State& state) {
    const ModelParams p = reference();
    for (auto _ : state) {
        const auto folds = fold_points(p, 0.1, 2.0, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(folds);
    }
}
BENCHMARK(BM_FoldPoints)->Arg(128)->Arg(512);

void BM_IntegrateOnePeriod(benchmark::State& state) {
    const ModelParams p = reference();
    const auto rhs = [&p](double t, const Vec2& y) {
        const Derivatives d = rhs_eroei(p, StateNE{y[0], y[1], t});
        return Vec2{d.dn, d.dslow};
    };
    for (auto _ : state) {
        const Trajectory traj = integrate(rhs, Vec2{0.2, 3.0}, 0.0, 110.0);
        benchmark::DoNotOptimize(traj);
    }
}
BENCHMARK(BM_IntegrateOnePeriod)->Unit(benchmark::kMillisecond);

void BM_FindLimitCycle(benchmark::State& state) {
    const ModelParams p = reference();
    for (auto _ : state) {
        const LimitCycle cycle = find_limit_cycle(p, StateNE{0.2, 3.0, 0.0});
        benchmark::DoNotOptimize(cycle);
    }
}
BENCHMARK(BM_FindLimitCycle)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
