#include "mmgp/nsga2.hpp"

#include "oracles.hpp"

#include <catch2/catch.hpp>

#include <algorithm>
#include <set>

using namespace mmgp;

namespace {

PrimitiveSet prims_for(std::size_t vars)
{
    PrimitiveSet p;
    p.variables = vars;
    p.erc = true;
    p.erc_min = -1;
    p.erc_max = 1;
    return p;
}

std::set<std::size_t> as_set(std::vector<std::size_t> const& v) { return { v.begin(), v.end() }; }

} // namespace

TEST_CASE("prefix trees")
{
    auto const x = NodeSymbol::feature(0);
    auto const k = NodeSymbol::constant(2);
    VarTree t { { NodeSymbol::function(SymbolKind::Minus), NodeSymbol::function(SymbolKind::Times), x, x, k } };
    REQUIRE(t.well_formed());
    REQUIRE(t.depth() == 2);
    REQUIRE(t.subtree_end(1) == 4);
    REQUIRE(t.subtree_end(4) == 5);
    REQUIRE(to_infix(t) == "((x1 × x1) − 2)");
    Dataset const ds({ { 0, 1, 3 } }, { 0, 0, 0 });
    REQUIRE(evaluate(t, ds) == std::vector<double> { -2, -1, 7 });

    VarTree broken { { NodeSymbol::function(SymbolKind::Plus), x } };
    REQUIRE_FALSE(broken.well_formed());
}

TEST_CASE("full depth for a size limit")
{
    REQUIRE(max_full_depth(1) == 0);
    REQUIRE(max_full_depth(6) == 1);
    REQUIRE(max_full_depth(7) == 2);
    REQUIRE(max_full_depth(14) == 2);
    REQUIRE(max_full_depth(15) == 3);
}

TEST_CASE("ramped half-and-half initialization")
{
    Rng rng(1);
    auto const prims = prims_for(3);
    auto const pop = init_ramped(200, 2, 7, prims, rng);
    REQUIRE(pop.size() == 200);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        REQUIRE(pop[i].trees.size() == 2);
        for (auto const& t : pop[i].trees) {
            REQUIRE(t.well_formed());
            REQUIRE(t.size() <= 7);
            if (i % 2 == 1) {
                // full trees at depth 1 or 2
                auto const d = 1 + (i / 2) % 2;
                REQUIRE(t.depth() == d);
                REQUIRE(t.size() == (std::size_t { 2 } << d) - 1);
            }
        }
    }

    SECTION("two individuals: one grown and one full")
    {
        auto const two = init_ramped(2, 1, 7, prims, rng);
        REQUIRE(two[1].trees[0].size() == 3);
        REQUIRE(two[0].trees[0].depth() <= 1);
    }
}

TEST_CASE("zero rates copy the parents")
{
    Rng rng(2);
    auto const prims = prims_for(2);
    auto const pop = init_ramped(10, 2, 7, prims, rng);
    auto const [a, b] = variate(pop[2], pop[3], { 0.0, 0.0 }, 7, prims, rng);
    for (std::size_t k = 0; k < 2; ++k) {
        REQUIRE(a.trees[k].nodes == pop[2].trees[k].nodes);
        REQUIRE(b.trees[k].nodes == pop[3].trees[k].nodes);
    }
}

TEST_CASE("root crossover swaps whole trees")
{
    Rng rng(3);
    auto const prims = prims_for(2);
    VarMultiTree const a { { VarTree { { NodeSymbol::feature(0) } } }, {} };
    VarMultiTree const b { { VarTree { { NodeSymbol::feature(1) } } }, {} };
    auto const [c, d] = variate(a, b, { 1.0, 0.0 }, 7, prims, rng);
    REQUIRE(c.trees[0].nodes == b.trees[0].nodes);
    REQUIRE(d.trees[0].nodes == a.trees[0].nodes);
}

TEST_CASE("variation never breaks the size limit")
{
    Rng rng(4);
    auto const prims = prims_for(3);
    auto pop = init_ramped(50, 2, 7, prims, rng);
    std::size_t violations = 0;
    for (int i = 0; i < 10000; ++i) {
        auto const x = rng.below(pop.size());
        auto const y = rng.below(pop.size());
        auto [c, d] = variate(pop[x], pop[y], {}, 7, prims, rng);
        for (auto const* child : { &c, &d }) {
            for (auto const& t : child->trees) {
                violations += !t.well_formed() || t.size() > 7;
            }
        }
        pop[x] = std::move(c);
        pop[y] = std::move(d);
    }
    REQUIRE(violations == 0);
}

TEST_CASE("non-dominated sorting matches front peeling")
{
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectiveVector> pts;
        for (int i = 0; i < 200; ++i) {
            // coarse grid so duplicates and ties occur
            pts.push_back({ static_cast<double>(rng.below(20)), static_cast<double>(rng.below(20)) });
        }
        auto const fast = nds_sort(pts);
        auto const slow = oracle::peel_fronts(pts);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t f = 0; f < fast.size(); ++f) {
            REQUIRE(as_set(fast[f]) == as_set(slow[f]));
        }
    }
}

TEST_CASE("crowding distance")
{
    std::vector<ObjectiveVector> const pts { { 0, 4 }, { 1, 2 }, { 2, 1 }, { 4, 0 } };
    std::vector<std::size_t> const front { 0, 1, 2, 3 };
    auto const cd = crowding_distance(pts, front);
    REQUIRE(std::isinf(cd[0]));
    REQUIRE(std::isinf(cd[3]));
    REQUIRE(cd[1] == Approx(2.0 / 4 + 3.0 / 4));
    REQUIRE(cd[2] == Approx(3.0 / 4 + 2.0 / 4));
}

TEST_CASE("zero generations and elitism")
{
    auto const ds = gen_multimodal(1);
    Nsga2Config cfg;
    cfg.population_size = 40;
    cfg.termination.max_generations = 0;
    auto const zero = run_nsga2(cfg, ds);
    REQUIRE(zero.generations == 0);
    REQUIRE(zero.evaluations == 40);
    REQUIRE_FALSE(zero.front.empty());

    cfg.termination.max_generations = 8;
    cfg.seed = 9;
    auto const run = run_nsga2(cfg, ds);
    REQUIRE(run.generations == 8);
    REQUIRE(run.evaluations == 40 * 9);
    for (std::size_t g = 1; g < run.history.size(); ++g) {
        REQUIRE(*run.history[g].best_e <= *run.history[g - 1].best_e);
        REQUIRE(*run.history[g].best_d1 <= *run.history[g - 1].best_d1);
    }
    for (auto const& p : run.front) {
        for (auto const& q : run.front) {
            REQUIRE_FALSE(dominates(p.objectives, q.objectives));
        }
    }
}
