#include "mmgp/archive.hpp"
#include "mmgp/clustering.hpp"
#include "mmgp/linkage.hpp"
#include "mmgp/metrics.hpp"
#include "mmgp/nsga2.hpp"
#include "mmgp/objectives.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace mmgp;

namespace {

std::vector<MultiTree> population(std::size_t n, Dataset const& ds, Rng& rng)
{
    auto const prims = PrimitiveSet::for_dataset(ds);
    std::vector<MultiTree> pop;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop.push_back(MultiTree::random(TreeTemplate(3), 2, prims, rng));
    }
    return pop;
}

std::vector<ObjectiveVector> random_points(std::size_t n, Rng& rng)
{
    std::vector<ObjectiveVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({ rng.uniform01(), rng.uniform01() });
    }
    return pts;
}

} // namespace

static void BM_EvaluateObjectives(benchmark::State& state)
{
    auto const ds = gen_multimodal(1);
    Rng rng(1);
    auto pop = population(256, ds, rng);
    std::vector<Objective> const objs { Objective::E, Objective::D1 };
    std::size_t i = 0;
    for (auto _ : state) {
        // fresh copy so the semantic cache does not short-circuit
        MultiTree mt(pop[i++ % pop.size()].shape(), 2, { pop[i % pop.size()].genes().begin(), pop[i % pop.size()].genes().end() });
        benchmark::DoNotOptimize(evaluate_objectives(mt, ds, objs));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EvaluateObjectives);

static void BM_EstimateMi(benchmark::State& state)
{
    auto const ds = gen_multimodal(2);
    Rng rng(2);
    auto const pop = population(static_cast<std::size_t>(state.range(0)), ds, rng);
    std::vector<MultiTree const*> ptrs;
    for (auto const& m : pop) {
        ptrs.push_back(&m);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_mi(ptrs));
    }
}
BENCHMARK(BM_EstimateMi)->Arg(200)->Arg(2000);

static void BM_LinkageTree(benchmark::State& state)
{
    auto const m = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    SimilarityMatrix sim(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            sim.set(i, j, rng.uniform01());
        }
    }
    std::vector<std::size_t> u(m);
    std::iota(u.begin(), u.end(), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_linkage_tree(sim, u, true, rng));
    }
}
BENCHMARK(BM_LinkageTree)->Arg(14)->Arg(62);

static void BM_Bklm(benchmark::State& state)
{
    Rng rng(4);
    auto const pts = random_points(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bklm_cluster(pts, 7, rng));
    }
}
BENCHMARK(BM_Bklm)->Arg(1000)->Arg(15000);

static void BM_Hypervolume(benchmark::State& state)
{
    Rng rng(5);
    auto const front = NormalizedFront::assume_normalized(random_points(static_cast<std::size_t>(state.range(0)), rng));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hypervolume_2d(front));
    }
}
BENCHMARK(BM_Hypervolume)->Arg(100)->Arg(10000);

static void BM_NdsSort(benchmark::State& state)
{
    Rng rng(6);
    auto const pts = random_points(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nds_sort(pts));
    }
}
BENCHMARK(BM_NdsSort)->Arg(1000)->Arg(4000);
BENCHMARK_MAIN();
