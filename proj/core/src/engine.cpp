#include "mmgp/engine.hpp"

#include "mmgp/metrics.hpp"
#include "mmgp/objectives.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mmgp {

void EngineConfig::validate() const
{
    if (population_size < 2) {
        throw std::invalid_argument("population size must be at least 2");
    }
    if (trees < 1) {
        throw std::invalid_argument("a multi-tree needs at least one tree");
    }
    if (objectives.empty()) {
        throw std::invalid_argument("no objectives configured");
    }
    if (mode == Mode::MultiObjective) {
        if (objectives.size() < 2) {
            throw std::invalid_argument("multi-objective mode needs at least two objectives");
        }
        if (clusters < 2 || clusters > population_size) {
            throw std::invalid_argument("cluster count must lie in [2, population size]");
        }
    } else if (so_objective >= objectives.size()) {
        throw std::invalid_argument("single-objective index out of range");
    }
    if (!termination.any()) {
        throw std::invalid_argument("at least one termination criterion is required");
    }
    if (threads < 1) {
        throw std::invalid_argument("thread count must be at least 1");
    }
    if (archive_capacity < 1) {
        throw std::invalid_argument("archive capacity must be positive");
    }
}

MoClause mo_clause(ObjectiveVector const& parent, MultiTree const& offspring, ObjectiveVector const& child,
    ElitistArchive const& archive, Dataset const& ds)
{
    if (dominates(child, parent)) {
        return MoClause::DominatesParent;
    }
    if (tolerant::equal(child, parent)) {
        return MoClause::EqualsParent;
    }
    auto const* same = archive.find_equal(child);
    if (same == nullptr) {
        return archive.dominated_by_any(child) ? MoClause::None : MoClause::NewArchiveRegion;
    }
    return semantically_equal(same->solution, offspring, ds) ? MoClause::None : MoClause::SemanticVariant;
}

bool accept_mo(ObjectiveVector const& parent, MultiTree const& offspring, ObjectiveVector const& child,
    ElitistArchive const& archive, Dataset const& ds)
{
    return mo_clause(parent, offspring, child, archive, ds) != MoClause::None;
}

Verdict judge(AcceptancePolicy const& policy, ObjectiveVector const& parent, MultiTree const& offspring,
    ObjectiveVector const& child, ElitistArchive const* archive, Dataset const& ds)
{
    Verdict v;
    if (policy.single_objective) {
        auto const m = *policy.single_objective;
        v.improved = child[m] < parent[m];
        v.accepted = policy.forced ? v.improved : child[m] <= parent[m];
        return v;
    }
    if (archive == nullptr) {
        throw std::logic_error("multi-objective acceptance needs an archive");
    }
    if (policy.forced && tolerant::equal(child, parent)) {
        return v;
    }
    v.clause = mo_clause(parent, offspring, child, *archive, ds);
    v.accepted = v.clause != MoClause::None;
    v.improved = v.clause == MoClause::DominatesParent || v.clause == MoClause::NewArchiveRegion;
    return v;
}

ObjectiveVector evaluate_individual(MultiTree& mt, GomContext& ctx)
{
    auto obj = evaluate_objectives(mt, ctx.train, ctx.objectives);
    mt.set_objectives(obj);
    if (ctx.evaluations != nullptr) {
        ctx.evaluations->fetch_add(1, std::memory_order_relaxed);
    }
    return obj;
}

namespace {

bool differs_on(MultiTree const& a, MultiTree const& b, std::vector<std::size_t> const& subset)
{
    return std::any_of(subset.begin(), subset.end(), [&](std::size_t i) { return !(a.gene(i) == b.gene(i)); });
}

// Applies one subset from `donor`, evaluates and judges the change; rejected
// changes are rolled back from `backup`.
std::optional<Verdict> try_subset(IndividualState& ind, MultiTree const& donor, std::vector<std::size_t> const& subset,
    AcceptancePolicy const& policy, GomContext& ctx, MultiTree& backup)
{
    if (!differs_on(ind.solution, donor, subset)) {
        return std::nullopt;
    }
    backup = ind.solution;
    replace_genes(ind.solution, donor, subset);
    auto child = evaluate_individual(ind.solution, ctx);

    bool const needs_lock = !policy.single_objective || ctx.observer != nullptr;
    std::unique_lock<std::mutex> lock;
    if (needs_lock && ctx.archive_mutex != nullptr) {
        lock = std::unique_lock(*ctx.archive_mutex);
    }
    auto const verdict = judge(policy, ind.objectives, ind.solution, child, ctx.archive, ctx.train);
    if (ctx.observer != nullptr) {
        ctx.observer->on_acceptance(
            { policy, ind.objectives, child, &ind.solution, verdict, ctx.archive, &ctx.train });
    }
    if (verdict.accepted) {
        ind.objectives = std::move(child);
    } else {
        std::swap(ind.solution, backup);
    }
    return verdict;
}

std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    return order;
}

} // namespace

GomResult gom_step(IndividualState& ind, Fos const& fos, std::span<MultiTree const* const> donors,
    AcceptancePolicy const& policy, GomContext& ctx, Rng& rng)
{
    GomResult result;
    if (donors.empty()) {
        return result;
    }
    MultiTree backup = ind.solution;
    for (auto f : shuffled_order(fos.size(), rng)) {
        MultiTree const& donor = *donors[rng.below(donors.size())];
        auto const verdict = try_subset(ind, donor, fos[f], policy, ctx, backup);
        if (verdict && verdict->accepted) {
            result.changed = true;
            result.improved = result.improved || verdict->improved;
        }
    }
    return result;
}

GomResult forced_improvements(IndividualState& ind, Fos const& fos, DonorSource const& source,
    AcceptancePolicy policy, GomContext& ctx, Rng& rng)
{
    policy.forced = true;
    MultiTree const donor = source(rng);
    MultiTree backup = ind.solution;
    for (auto f : shuffled_order(fos.size(), rng)) {
        auto const verdict = try_subset(ind, donor, fos[f], policy, ctx, backup);
        if (verdict && verdict->accepted) {
            return { true, verdict->improved };
        }
    }
    ind.solution = source(rng);
    if (auto const& obj = ind.solution.objectives()) {
        ind.objectives = *obj;
    } else {
        ind.objectives = evaluate_individual(ind.solution, ctx);
    }
    return { true, false };
}

namespace {

std::optional<std::size_t> index_of(std::span<Objective const> set, Objective o)
{
    auto const it = std::find(set.begin(), set.end(), o);
    if (it == set.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - set.begin());
}

void fill_bests(GenerationStats& s, std::span<Objective const> set, std::span<double const> best)
{
    if (auto e = index_of(set, Objective::E)) {
        s.best_e = best[*e];
    }
    if (auto d = index_of(set, Objective::D1)) {
        s.best_d1 = best[*d];
    }
}

double self_normalized_hv(std::vector<ObjectiveVector> const& front)
{
    if (front.empty()) {
        return 0.0;
    }
    std::vector<std::vector<ObjectiveVector>> one { front };
    auto const norm = normalize_fronts(one);
    return hypervolume_2d(project(norm.fronts.front(), 0, 1));
}

void log_progress(std::ostream* out, GenerationStats const& s)
{
    if (out == nullptr) {
        return;
    }
    auto opt = [](std::optional<double> v) {
        std::ostringstream os;
        if (v) {
            os << std::setprecision(6) << *v;
        } else {
            os << "-";
        }
        return os.str();
    };
    *out << "gen " << s.generation << " evals " << s.evaluations << " archive " << s.archive_size << " best_E "
         << opt(s.best_e) << " best_D1 " << opt(s.best_d1) << '\n';
}

// Runs vary(i, rng) for every individual, serially on the master stream or
// striped across worker threads with their own streams.
template <typename F>
void for_each_individual(std::size_t n, std::size_t threads, Rng& rng, F&& vary)
{
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            vary(i, rng);
        }
        return;
    }
    std::vector<Rng> streams;
    for (std::size_t w = 0; w < threads; ++w) {
        streams.emplace_back(rng());
    }
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) {
                vary(i, streams[w]);
            }
        });
    }
    for (auto& t : workers) {
        t.join();
    }
}

std::vector<IndividualState> initial_population(EngineConfig const& cfg, Dataset const& train, GomContext& ctx, Rng& rng)
{
    TreeTemplate const shape(cfg.height);
    auto const prims = PrimitiveSet::for_dataset(train, cfg.use_erc);
    std::vector<IndividualState> pop;
    pop.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        auto mt = MultiTree::random(shape, cfg.trees, prims, rng);
        auto obj = evaluate_individual(mt, ctx);
        pop.push_back({ std::move(mt), std::move(obj) });
    }
    return pop;
}

std::vector<MultiTree const*> pointers_to(std::vector<IndividualState> const& pop, std::span<std::size_t const> which)
{
    std::vector<MultiTree const*> out;
    out.reserve(which.size());
    for (auto i : which) {
        out.push_back(&pop[i].solution);
    }
    return out;
}

} // namespace

MoResult run_mo(EngineConfig const& cfg, Dataset const& train, EngineObserver* observer)
{
    cfg.validate();
    if (cfg.mode != Mode::MultiObjective) {
        throw std::invalid_argument("run_mo requires multi-objective mode");
    }
    Rng rng(cfg.seed);
    MoResult res { ElitistArchive(cfg.archive_capacity), {}, 0, 0 };
    auto& archive = res.archive;
    std::mutex archive_mutex;
    std::atomic<std::size_t> evaluations { 0 };
    GomContext ctx { train, cfg.objectives, &archive, &archive_mutex, &evaluations, observer };

    auto pop = initial_population(cfg, train, ctx, rng);
    for (auto const& ind : pop) {
        auto const added = archive.update(ind.solution, ind.objectives, train, rng);
        if (observer != nullptr) {
            observer->on_archive_update(archive, added);
        }
    }

    auto const threshold = nis_threshold(cfg.population_size);
    auto const length = TreeTemplate(cfg.height).length();
    Budget const budget(cfg.termination);

    auto record = [&](std::size_t gen) {
        GenerationStats s;
        s.generation = gen;
        s.evaluations = evaluations.load();
        s.archive_size = archive.size();
        s.hv_proxy = self_normalized_hv(archive.front());
        fill_bests(s, cfg.objectives, archive.best_values());
        res.history.push_back(s);
        log_progress(cfg.progress, s);
        if (observer != nullptr) {
            observer->on_generation(s, pop);
        }
    };
    record(0);

    std::size_t gen = 0;
    while (!budget.exhausted(gen, evaluations.load())) {
        std::vector<ObjectiveVector> objs;
        objs.reserve(pop.size());
        for (auto const& ind : pop) {
            objs.push_back(ind.objectives);
        }
        auto assignment = bklm_cluster(objs, cfg.clusters, rng);
        determine_extreme_clusters(assignment, objs, rng);

        std::vector<std::vector<MultiTree const*>> donors(cfg.clusters);
        std::vector<Fos> fos(cfg.clusters);
        for (std::size_t c = 0; c < cfg.clusters; ++c) {
            auto const members = assignment.members(c);
            if (members.empty()) {
                continue;
            }
            donors[c] = pointers_to(pop, members);
            fos[c] = build_multitree_fos(donors[c], cfg.trees, length, rng);
            if (cfg.fos_dump != nullptr) {
                *cfg.fos_dump << "# generation " << gen + 1 << " cluster " << c << '\n';
                write_fos(fos[c], *cfg.fos_dump);
            }
        }

        std::vector<IndividualState> offspring = pop;
        for_each_individual(pop.size(), cfg.threads, rng, [&](std::size_t i, Rng& r) {
            auto& ind = offspring[i];
            auto const c = assignment.membership[i];
            ind.cluster = c;
            auto const extreme = assignment.extreme_objective(c);
            AcceptancePolicy const policy { extreme, false };

            auto outcome = gom_step(ind, fos[c], donors[c], policy, ctx, r);
            if (!outcome.changed || static_cast<double>(ind.nis) > threshold) {
                auto const mode = extreme ? DonorMode::best_on_objective(*extreme) : DonorMode::random();
                DonorSource source = [&](Rng& rr) {
                    std::scoped_lock lock(archive_mutex);
                    return fi_donor(archive, mode, rr);
                };
                auto const fi = forced_improvements(ind, fos[c], source, policy, ctx, r);
                outcome.improved = outcome.improved || fi.improved;
            }
            ind.nis = outcome.improved ? 0 : ind.nis + 1;

            std::scoped_lock lock(archive_mutex);
            auto const added = archive.update(ind.solution, ind.objectives, train, r);
            if (observer != nullptr) {
                observer->on_archive_update(archive, added);
            }
        });
        pop = std::move(offspring);
        ++gen;
        record(gen);
    }
    res.evaluations = evaluations.load();
    res.generations = gen;
    return res;
}

SoResult run_so(EngineConfig const& cfg, Dataset const& train, EngineObserver* observer)
{
    cfg.validate();
    if (cfg.mode != Mode::SingleObjective) {
        throw std::invalid_argument("run_so requires single-objective mode");
    }
    auto const m = cfg.so_objective;
    Rng rng(cfg.seed);
    std::mutex elite_mutex;
    std::atomic<std::size_t> evaluations { 0 };
    GomContext ctx { train, cfg.objectives, nullptr, &elite_mutex, &evaluations, observer };

    auto pop = initial_population(cfg, train, ctx, rng);
    std::size_t first_best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (pop[i].objectives[m] < pop[first_best].objectives[m]) {
            first_best = i;
        }
    }
    IndividualState elite = pop[first_best];
    std::vector<double> best_seen(pop.front().objectives.begin(), pop.front().objectives.end());
    auto observe = [&](ObjectiveVector const& o) {
        for (std::size_t d = 0; d < best_seen.size(); ++d) {
            best_seen[d] = std::min(best_seen[d], o[d]);
        }
    };
    for (auto const& ind : pop) {
        observe(ind.objectives);
    }

    auto const threshold = nis_threshold(cfg.population_size);
    auto const length = TreeTemplate(cfg.height).length();
    Budget const budget(cfg.termination);
    SoResult res { elite.solution, elite.objectives, {}, 0, 0 };

    auto record = [&](std::size_t gen) {
        GenerationStats s;
        s.generation = gen;
        s.evaluations = evaluations.load();
        s.archive_size = 1;
        fill_bests(s, cfg.objectives, best_seen);
        res.history.push_back(s);
        log_progress(cfg.progress, s);
        if (observer != nullptr) {
            observer->on_generation(s, pop);
        }
    };
    record(0);

    std::vector<std::size_t> everyone(pop.size());
    std::iota(everyone.begin(), everyone.end(), 0);

    std::size_t gen = 0;
    while (!budget.exhausted(gen, evaluations.load())) {
        auto const donors = pointers_to(pop, everyone);
        auto const fos = build_multitree_fos(donors, cfg.trees, length, rng);
        if (cfg.fos_dump != nullptr) {
            *cfg.fos_dump << "# generation " << gen + 1 << '\n';
            write_fos(fos, *cfg.fos_dump);
        }

        std::vector<IndividualState> offspring = pop;
        for_each_individual(pop.size(), cfg.threads, rng, [&](std::size_t i, Rng& r) {
            auto& ind = offspring[i];
            AcceptancePolicy const policy { m, false };
            auto outcome = gom_step(ind, fos, donors, policy, ctx, r);
            if (!outcome.changed || static_cast<double>(ind.nis) > threshold) {
                DonorSource source = [&](Rng&) {
                    std::scoped_lock lock(elite_mutex);
                    return elite.solution;
                };
                auto const fi = forced_improvements(ind, fos, source, policy, ctx, r);
                outcome.improved = outcome.improved || fi.improved;
            }
            ind.nis = outcome.improved ? 0 : ind.nis + 1;

            std::scoped_lock lock(elite_mutex);
            observe(ind.objectives);
            if (ind.objectives[m] < elite.objectives[m]) {
                elite = ind;
            }
        });
        pop = std::move(offspring);
        ++gen;
        record(gen);
    }
    res.best = elite.solution;
    res.best_objectives = elite.objectives;
    res.evaluations = evaluations.load();
    res.generations = gen;
    return res;
}

} // namespace mmgp
