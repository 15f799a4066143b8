#include "mmgp/engine.hpp"

#include "mmgp/objectives.hpp"

#include <catch2/catch.hpp>

#include <cmath>
#include <numeric>

using namespace mmgp;

namespace {

constexpr auto plus = NodeSymbol::function(SymbolKind::Plus);
constexpr auto times = NodeSymbol::function(SymbolKind::Times);
constexpr NodeSymbol x1 = NodeSymbol::feature(0);
constexpr NodeSymbol c(double v) { return NodeSymbol::constant(v); }

std::vector<Objective> const e_d1 { Objective::E, Objective::D1 };

Dataset line() { return Dataset({ { 0, 1, 2, 3 } }, { 0, 1, 2, 3 }); }

IndividualState state_of(MultiTree mt, Dataset const& ds)
{
    auto obj = evaluate_objectives(mt, ds, e_d1);
    mt.set_objectives(obj);
    return { std::move(mt), std::move(obj) };
}

MultiTree two_leaves(NodeSymbol a, NodeSymbol b) { return MultiTree(TreeTemplate(1), 2, { a, b }); }

struct Recorder : EngineObserver {
    std::vector<AcceptanceEvent> events;
    std::vector<std::size_t> population_sizes;
    void on_acceptance(AcceptanceEvent const& e) override { events.push_back(e); }
    void on_generation(GenerationStats const&, std::span<IndividualState const> pop) override
    {
        population_sizes.push_back(pop.size());
    }
};

} // namespace

TEST_CASE("NIS threshold")
{
    REQUIRE(nis_threshold(1000) == Approx(4.0));
    REQUIRE(nis_threshold(10) == Approx(2.0));
}

TEST_CASE("config validation")
{
    EngineConfig cfg;
    cfg.termination.max_generations = 1;
    REQUIRE_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.termination = {};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.clusters = 1;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.population_size = 1;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-objective acceptance")
{
    auto const ds = line();
    AcceptancePolicy const so { 0, false };
    auto const mt = two_leaves(x1, x1);
    ObjectiveVector const parent { 1.0, 5.0 };
    REQUIRE(judge(so, parent, mt, { 1.0, 9.0 }, nullptr, ds).accepted);
    REQUIRE_FALSE(judge(so, parent, mt, { 1.0, 9.0 }, nullptr, ds).improved);
    REQUIRE(judge(so, parent, mt, { 0.5, 9.0 }, nullptr, ds).improved);
    REQUIRE_FALSE(judge(so, parent, mt, { 1.5, 0.0 }, nullptr, ds).accepted);

    AcceptancePolicy const forced { 0, true };
    REQUIRE_FALSE(judge(forced, parent, mt, { 1.0, 0.0 }, nullptr, ds).accepted);
    REQUIRE(judge(forced, parent, mt, { 0.9, 9.0 }, nullptr, ds).accepted);
}

TEST_CASE("multi-objective acceptance clauses")
{
    auto const ds = line();
    Rng rng(1);
    ElitistArchive archive;
    auto const stored = two_leaves(c(7), c(7));
    archive.update(stored, { 2.0, 2.0 }, ds, rng);
    archive.update(two_leaves(c(8), c(8)), { 1.0, 4.0 }, ds, rng);

    ObjectiveVector const parent { 3.0, 3.0 };
    auto const variant = two_leaves(c(6), c(6));

    REQUIRE(mo_clause(parent, variant, { 2.5, 2.5 }, archive, ds) == MoClause::DominatesParent);
    REQUIRE(mo_clause(parent, variant, { 3.0, 3.0 }, archive, ds) == MoClause::EqualsParent);
    REQUIRE(mo_clause(parent, variant, { 0.5, 5.0 }, archive, ds) == MoClause::NewArchiveRegion);
    REQUIRE(mo_clause(parent, variant, { 2.0, 3.5 }, archive, ds) == MoClause::None);
    REQUIRE_FALSE(accept_mo(parent, variant, { 2.0, 3.5 }, archive, ds));

    // same objectives as an archive member: semantics decide
    ObjectiveVector const other_parent { 1.5, 1.0 };
    REQUIRE(mo_clause(other_parent, variant, { 2.0, 2.0 }, archive, ds) == MoClause::SemanticVariant);
    REQUIRE(mo_clause(other_parent, stored, { 2.0, 2.0 }, archive, ds) == MoClause::None);

    AcceptancePolicy const forced { std::nullopt, true };
    REQUIRE_FALSE(judge(forced, parent, variant, { 3.0, 3.0 }, &archive, ds).accepted);
    auto const v = judge(forced, parent, variant, { 2.5, 2.5 }, &archive, ds);
    REQUIRE(v.accepted);
    REQUIRE(v.improved);
}

TEST_CASE("GOM with only self-donors never changes anything")
{
    auto const ds = line();
    Rng rng(2);
    PrimitiveSet prims;
    auto ind = state_of(MultiTree::random(TreeTemplate(3), 2, prims, rng), ds);
    auto const clone = ind.solution;
    std::vector<MultiTree const*> const donors { &clone };
    Fos fos;
    for (std::size_t i = 0; i < 14; ++i) {
        fos.push_back({ i });
    }
    std::atomic<std::size_t> evals { 0 };
    GomContext ctx { ds, e_d1, nullptr, nullptr, &evals, nullptr };
    auto const r = gom_step(ind, fos, donors, AcceptancePolicy { 0, false }, ctx, rng);
    REQUIRE_FALSE(r.changed);
    REQUIRE(evals == 0);
}

TEST_CASE("a worse donor is undone exactly")
{
    auto const ds = line();
    Rng rng(3);
    auto ind = state_of(two_leaves(x1, x1), ds);
    auto const before = ind.solution;
    auto const donor = two_leaves(c(100), x1);
    std::vector<MultiTree const*> const donors { &donor };
    std::atomic<std::size_t> evals { 0 };
    GomContext ctx { ds, e_d1, nullptr, nullptr, &evals, nullptr };
    auto const r = gom_step(ind, Fos { { 0 } }, donors, AcceptancePolicy { 0, false }, ctx, rng);
    REQUIRE_FALSE(r.changed);
    REQUIRE(evals == 1);
    REQUIRE(std::equal(ind.solution.genes().begin(), ind.solution.genes().end(), before.genes().begin()));
    REQUIRE(ind.objectives == ObjectiveVector { 0.0, 0.0 });
}

TEST_CASE("an equally good donor change is kept")
{
    auto const ds = line();
    Rng rng(4);
    // (x1 + 0) in tree 1 becomes plain x1: same semantics, same objectives
    auto ind = state_of(MultiTree(TreeTemplate(2), 2, { plus, x1, c(0), x1, x1, x1 }), ds);
    auto const donor = MultiTree(TreeTemplate(2), 2, { x1, c(9), c(9), x1, x1, x1 });
    std::vector<MultiTree const*> const donors { &donor };
    std::atomic<std::size_t> evals { 0 };
    GomContext ctx { ds, e_d1, nullptr, nullptr, &evals, nullptr };
    auto const r = gom_step(ind, Fos { { 0 } }, donors, AcceptancePolicy { 0, false }, ctx, rng);
    REQUIRE(r.changed);
    REQUIRE_FALSE(r.improved);
    REQUIRE(ind.solution.gene(0) == x1);
}

TEST_CASE("forced improvements fall back to an archive clone")
{
    auto const ds = line();
    Rng rng(5);
    ElitistArchive archive;
    std::mutex mutex;
    std::atomic<std::size_t> evals { 0 };
    GomContext ctx { ds, e_d1, &archive, &mutex, &evals, nullptr };

    auto ind = state_of(two_leaves(c(0.5), c(2.5)), ds);
    archive.update(ind.solution, ind.objectives, ds, rng);
    DonorSource const same = [&](Rng& r) { return fi_donor(archive, DonorMode::random(), r); };
    auto const r = forced_improvements(ind, Fos { { 0 }, { 1 } }, same, AcceptancePolicy {}, ctx, rng);
    REQUIRE(r.changed);
    REQUIRE_FALSE(r.improved);
    REQUIRE(ind.objectives == archive.entries()[0].objectives);

    SECTION("extreme cluster takes the best member on its objective")
    {
        auto const best_e = state_of(two_leaves(x1, c(0)), ds); // E = 3.5, D1 = 0
        auto const best_d = state_of(two_leaves(c(1.5), c(1.5)), ds); // E = 2.5, D1 = 1.25
        ElitistArchive a2;
        a2.update(best_e.solution, best_e.objectives, ds, rng);
        a2.update(best_d.solution, best_d.objectives, ds, rng);
        REQUIRE(a2.size() == 2);
        GomContext ctx2 { ds, e_d1, &a2, &mutex, &evals, nullptr };
        auto stuck = state_of(two_leaves(c(1.5), c(10)), ds);
        DonorSource const best = [&](Rng& r) { return fi_donor(a2, DonorMode::best_on_objective(0), r); };
        forced_improvements(stuck, Fos { { 1 } }, best, AcceptancePolicy { 0, false }, ctx2, rng);
        REQUIRE(stuck.objectives[0] == best_d.objectives[0]);
    }
}

TEST_CASE("zero generations returns the archive of the initial population")
{
    auto const ds = gen_multimodal(1);
    EngineConfig cfg;
    cfg.population_size = 60;
    cfg.clusters = 3;
    cfg.termination.max_generations = 0;
    auto const res = run_mo(cfg, ds);
    REQUIRE(res.generations == 0);
    REQUIRE(res.evaluations == 60);
    REQUIRE(res.history.size() == 1);
    REQUIRE_FALSE(res.archive.empty());
}

TEST_CASE("two clusters: every GOM acceptance is single-objective")
{
    auto const ds = gen_multimodal(2);
    EngineConfig cfg;
    cfg.population_size = 60;
    cfg.clusters = 2;
    cfg.termination.max_generations = 3;
    Recorder rec;
    run_mo(cfg, ds, &rec);
    REQUIRE_FALSE(rec.events.empty());
    for (auto const& e : rec.events) {
        REQUIRE(e.policy.single_objective.has_value());
    }
    REQUIRE(rec.population_sizes == std::vector<std::size_t>(4, 60));
}

TEST_CASE("single-objective GP-GOMEA finds x * x without noise")
{
    auto const full = gen_multimodal(4, 0.0);
    std::vector<std::size_t> first(100);
    std::iota(first.begin(), first.end(), 0);
    auto const ds = full.select_rows(first);

    EngineConfig cfg;
    cfg.mode = Mode::SingleObjective;
    cfg.population_size = 500;
    cfg.termination.max_generations = 30;
    cfg.seed = 4;
    auto const res = run_so(cfg, ds);
    REQUIRE(res.best_objectives[0] < 1e-6);
    for (std::size_t g = 1; g < res.history.size(); ++g) {
        REQUIRE(*res.history[g].best_e <= *res.history[g - 1].best_e);
    }
}

TEST_CASE("evaluation budget equal to the population stops after initialization")
{
    auto const ds = gen_multimodal(5);
    EngineConfig cfg;
    cfg.mode = Mode::SingleObjective;
    cfg.population_size = 50;
    cfg.termination.max_evaluations = 50;
    auto const res = run_so(cfg, ds);
    REQUIRE(res.generations == 0);
    REQUIRE(res.evaluations == 50);
    REQUIRE(*res.history.front().best_e == res.best_objectives[0]);
}

TEST_CASE("runs replay exactly for a seed")
{
    auto const ds = gen_multimodal(6);
    EngineConfig cfg;
    cfg.population_size = 80;
    cfg.clusters = 3;
    cfg.termination.max_generations = 4;
    cfg.seed = 77;
    auto const a = run_mo(cfg, ds);
    auto const b = run_mo(cfg, ds);
    REQUIRE(a.archive.front() == b.archive.front());
    REQUIRE(a.evaluations == b.evaluations);
}

TEST_CASE("threaded mode runs and keeps the archive clean")
{
    auto const ds = gen_multimodal(7);
    EngineConfig cfg;
    cfg.population_size = 80;
    cfg.clusters = 3;
    cfg.threads = 3;
    cfg.termination.max_generations = 3;
    auto const res = run_mo(cfg, ds);
    auto const front = res.archive.front();
    for (auto const& p : front) {
        for (auto const& q : front) {
            REQUIRE_FALSE(dominates(p, q));
        }
    }
}
