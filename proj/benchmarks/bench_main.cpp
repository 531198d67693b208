#include <benchmark/benchmark.h>

#include "influence_dyn/dynamics.hpp"
#include "influence_dyn/network_gen.hpp"
#include "influence_dyn/power.hpp"

using namespace influence_dyn;

namespace {

CoefficientSchedule affine_model_i(std::size_t n) {
    return CoefficientSchedule::model_i(uniform_maps(n, ScalarMap::affine(0.1, 0.3)),
                                        uniform_maps(n, ScalarMap::constant(0.3)));
}

CoefficientSchedule degroot_friedkin(std::size_t n) {
    return CoefficientSchedule::model_ii(uniform_maps(n, ScalarMap::identity()));
}

void BM_PerronVector(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = generate_random_network(n, 0.3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(dominant_left_eigenvector(p.matrix()));
}
BENCHMARK(BM_PerronVector)->RangeMultiplier(4)->Range(8, 512);

void BM_StepIDirect(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = generate_random_network(n, 0.3, 2);
    const auto s = affine_model_i(n);
    const auto x = SimplexVector::uniform(n);
    for (auto _ : state) benchmark::DoNotOptimize(step_I_direct(x, p, s));
}
BENCHMARK(BM_StepIDirect)->RangeMultiplier(4)->Range(8, 512);

void BM_StepIEigen(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = generate_random_network(n, 0.3, 2);
    const auto s = affine_model_i(n);
    const auto x = SimplexVector::uniform(n);
    for (auto _ : state) benchmark::DoNotOptimize(step_I_eigen(x, p, s));
}
BENCHMARK(BM_StepIEigen)->RangeMultiplier(4)->Range(8, 512);

void BM_StepIIFormula(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = generate_random_network(n, 0.3, 3);
    const AppraisalMap map(p, degroot_friedkin(n), StepMethod::TheoremForm);
    const auto x = SimplexVector::uniform(n);
    for (auto _ : state) benchmark::DoNotOptimize(map(x));
}
BENCHMARK(BM_StepIIFormula)->RangeMultiplier(4)->Range(8, 512);

void BM_SimulateIssue(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = generate_random_network(n, 0.3, 4);
    const auto s = affine_model_i(n);
    const auto x = SimplexVector::uniform(n);
    const auto y0 = OpinionVector::spread(n);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_issue(y0, p, s, x, 1e-12, 100000));
}
BENCHMARK(BM_SimulateIssue)->RangeMultiplier(4)->Range(8, 512);

void BM_EvolveDeGrootFriedkin(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = generate_random_network(n, 0.3, 5);
    const AppraisalMap map(p, degroot_friedkin(n));
    Rng rng(6);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& e : v) e = rng.uniform_open01();
    const auto x0 = SimplexVector::normalized(v);
    for (auto _ : state) benchmark::DoNotOptimize(evolve(x0, map));
}
BENCHMARK(BM_EvolveDeGrootFriedkin)->RangeMultiplier(4)->Range(8, 128);

}  // namespace

BENCHMARK_MAIN();
