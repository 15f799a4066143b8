#include "mmgp/nsga2.hpp"

#include "mmgp/metrics.hpp"
#include "mmgp/objectives.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mmgp {

std::size_t VarTree::subtree_end(std::size_t pos) const
{
    std::size_t open = 1;
    for (std::size_t i = pos; i < nodes.size(); ++i) {
        open += nodes[i].is_function() ? 1 : 0;
        if (nodes[i].is_terminal() && --open == 0) {
            return i + 1;
        }
    }
    throw std::logic_error("incomplete prefix tree");
}

unsigned VarTree::depth() const
{
    unsigned deepest = 0;
    std::vector<unsigned> pending; // depths of the child slots still to fill
    pending.push_back(0);
    for (auto const& s : nodes) {
        auto const d = pending.back();
        pending.pop_back();
        deepest = std::max(deepest, d);
        if (s.is_function()) {
            pending.push_back(d + 1);
            pending.push_back(d + 1);
        }
    }
    return deepest;
}

bool VarTree::well_formed() const
{
    std::size_t open = 1;
    for (auto const& s : nodes) {
        if (open == 0) {
            return false;
        }
        open = s.is_function() ? open + 1 : open - 1;
    }
    return open == 0;
}

std::vector<double> evaluate(VarTree const& tree, Dataset const& ds)
{
    auto const rows = ds.rows();
    std::vector<std::vector<double>> stack;
    for (auto it = tree.nodes.rbegin(); it != tree.nodes.rend(); ++it) {
        auto const& s = *it;
        if (s.kind == SymbolKind::Variable) {
            auto const col = ds.column(s.variable);
            stack.emplace_back(col.begin(), col.end());
            continue;
        }
        if (s.kind == SymbolKind::Constant) {
            stack.emplace_back(rows, s.value);
            continue;
        }
        if (stack.size() < 2) {
            throw std::logic_error("malformed prefix tree");
        }
        auto a = std::move(stack.back());
        stack.pop_back();
        auto const& b = stack.back();
        for (std::size_t i = 0; i < rows; ++i) {
            switch (s.kind) {
            case SymbolKind::Plus:
                a[i] += b[i];
                break;
            case SymbolKind::Minus:
                a[i] -= b[i];
                break;
            case SymbolKind::Times:
                a[i] *= b[i];
                break;
            default:
                a[i] = protected_div(a[i], b[i]);
                break;
            }
        }
        stack.back() = std::move(a);
    }
    if (stack.size() != 1) {
        throw std::logic_error("malformed prefix tree");
    }
    return std::move(stack.back());
}

std::string to_infix(VarTree const& tree)
{
    std::size_t pos = 0;
    auto render = [&](auto&& self) -> std::string {
        auto const& s = tree.nodes.at(pos++);
        if (s.is_terminal()) {
            return symbol_label(s);
        }
        auto left = self(self);
        auto right = self(self);
        return "(" + left + " " + symbol_label(s) + " " + right + ")";
    };
    return render(render);
}

std::vector<std::vector<double>> semantics(VarMultiTree const& mt, Dataset const& ds)
{
    std::vector<std::vector<double>> out;
    out.reserve(mt.trees.size());
    for (auto const& t : mt.trees) {
        out.push_back(evaluate(t, ds));
    }
    return out;
}

unsigned max_full_depth(std::size_t max_size)
{
    if (max_size < 1) {
        throw std::invalid_argument("max_size must be at least 1");
    }
    unsigned d = 0;
    while (((std::size_t { 4 } << d) - 1) <= max_size) {
        ++d;
    }
    return d;
}

namespace {

void generate_into(std::vector<NodeSymbol>& out, PrimitiveSet const& prims, unsigned remaining, bool full, Rng& rng)
{
    NodeSymbol s;
    if (remaining == 0) {
        s = prims.sample_terminal(rng);
    } else if (full) {
        s = NodeSymbol::function(prims.functions[rng.below(prims.functions.size())]);
    } else {
        s = prims.sample_any(rng);
    }
    out.push_back(s);
    if (s.is_function()) {
        generate_into(out, prims, remaining - 1, full, rng);
        generate_into(out, prims, remaining - 1, full, rng);
    }
}

VarTree splice(VarTree const& host, std::size_t pos, std::span<NodeSymbol const> graft)
{
    auto const end = host.subtree_end(pos);
    VarTree out;
    out.nodes.reserve(host.size() - (end - pos) + graft.size());
    out.nodes.insert(out.nodes.end(), host.nodes.begin(), host.nodes.begin() + static_cast<std::ptrdiff_t>(pos));
    out.nodes.insert(out.nodes.end(), graft.begin(), graft.end());
    out.nodes.insert(out.nodes.end(), host.nodes.begin() + static_cast<std::ptrdiff_t>(end), host.nodes.end());
    return out;
}

std::span<NodeSymbol const> subtree_at(VarTree const& t, std::size_t pos)
{
    return std::span<NodeSymbol const>(t.nodes).subspan(pos, t.subtree_end(pos) - pos);
}

VarTree mutate(VarTree const& t, std::size_t max_size, PrimitiveSet const& prims, Rng& rng)
{
    auto const pos = rng.below(t.size());
    auto const removed = t.subtree_end(pos) - pos;
    auto const room = max_size - (t.size() - removed);
    VarTree graft = generate_tree(prims, max_full_depth(room), false, rng);
    return splice(t, pos, graft.nodes);
}

} // namespace

VarTree generate_tree(PrimitiveSet const& prims, unsigned depth, bool full, Rng& rng)
{
    VarTree t;
    generate_into(t.nodes, prims, depth, full, rng);
    return t;
}

std::vector<VarMultiTree> init_ramped(
    std::size_t pop_size, std::size_t trees, std::size_t max_size, PrimitiveSet const& prims, Rng& rng)
{
    auto const deepest = max_full_depth(max_size);
    std::vector<VarMultiTree> pop(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        unsigned const depth = deepest == 0 ? 0 : 1 + static_cast<unsigned>((i / 2) % deepest);
        bool const full = i % 2 == 1;
        pop[i].trees.reserve(trees);
        for (std::size_t k = 0; k < trees; ++k) {
            pop[i].trees.push_back(generate_tree(prims, depth, full, rng));
        }
    }
    return pop;
}

std::pair<VarMultiTree, VarMultiTree> variate(VarMultiTree const& a, VarMultiTree const& b, VariationRates rates,
    std::size_t max_size, PrimitiveSet const& prims, Rng& rng)
{
    if (a.trees.size() != b.trees.size()) {
        throw std::invalid_argument("parents differ in tree count");
    }
    VarMultiTree c { a.trees, {} };
    VarMultiTree d { b.trees, {} };
    for (std::size_t k = 0; k < a.trees.size(); ++k) {
        auto const u = rng.uniform01();
        auto const& ta = a.trees[k];
        auto const& tb = b.trees[k];
        if (u < rates.crossover) {
            auto const pa = rng.below(ta.size());
            auto const pb = rng.below(tb.size());
            auto ca = splice(ta, pa, subtree_at(tb, pb));
            auto cb = splice(tb, pb, subtree_at(ta, pa));
            if (ca.size() <= max_size) {
                c.trees[k] = std::move(ca);
            }
            if (cb.size() <= max_size) {
                d.trees[k] = std::move(cb);
            }
        } else if (u < rates.crossover + rates.mutation) {
            c.trees[k] = mutate(ta, max_size, prims, rng);
            d.trees[k] = mutate(tb, max_size, prims, rng);
        }
    }
    return { std::move(c), std::move(d) };
}

std::vector<std::vector<std::size_t>> nds_sort(std::span<ObjectiveVector const> points)
{
    auto const n = points.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(points[p], points[q])) {
                dominated[p].push_back(q);
                ++count[q];
            } else if (dominates(points[q], points[p])) {
                dominated[q].push_back(p);
                ++count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (count[p] == 0) {
            fronts[0].push_back(p);
        }
    }
    while (!fronts.back().empty()) {
        std::vector<std::size_t> next;
        for (auto p : fronts.back()) {
            for (auto q : dominated[p]) {
                if (--count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<ObjectiveVector const> points, std::span<std::size_t const> front)
{
    auto const n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) {
        return dist;
    }
    auto const inf = std::numeric_limits<double>::infinity();
    auto const dims = points[front[0]].size();
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < dims; ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return points[front[i]][m] < points[front[j]][m]; });
        auto const lo = points[front[order.front()]][m];
        auto const hi = points[front[order.back()]][m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi <= lo) {
            continue;
        }
        for (std::size_t r = 1; r + 1 < n; ++r) {
            auto const gap = points[front[order[r + 1]]][m] - points[front[order[r - 1]]][m];
            dist[order[r]] += gap / (hi - lo);
        }
    }
    return dist;
}

void Nsga2Config::validate() const
{
    if (population_size < 2) {
        throw std::invalid_argument("population size must be at least 2");
    }
    if (trees < 1) {
        throw std::invalid_argument("a multi-tree needs at least one tree");
    }
    if (max_size < 1) {
        throw std::invalid_argument("max_size must be at least 1");
    }
    if (tournament < 1) {
        throw std::invalid_argument("tournament size must be at least 1");
    }
    if (objectives.size() < 2) {
        throw std::invalid_argument("NSGA-II needs at least two objectives");
    }
    if (rates.crossover < 0 || rates.mutation < 0 || rates.crossover + rates.mutation > 1) {
        throw std::invalid_argument("variation rates must be non-negative and sum to at most 1");
    }
    if (!termination.any()) {
        throw std::invalid_argument("at least one termination criterion is required");
    }
    if (threads < 1) {
        throw std::invalid_argument("thread count must be at least 1");
    }
}

namespace {

void evaluate_all(std::span<VarMultiTree> pop, Dataset const& train, std::span<Objective const> objectives,
    std::size_t threads)
{
    auto one = [&](VarMultiTree& mt) {
        auto const sem = semantics(mt, train);
        mt.objectives = evaluate_objectives(view_of(sem), train.targets(), objectives);
    };
    if (threads <= 1) {
        for (auto& mt : pop) {
            one(mt);
        }
        return;
    }
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < pop.size(); i += threads) {
                one(pop[i]);
            }
        });
    }
    for (auto& t : workers) {
        t.join();
    }
}

struct Ranking {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
    std::vector<std::vector<std::size_t>> fronts;
};

Ranking rank_population(std::span<VarMultiTree const> pop)
{
    std::vector<ObjectiveVector> objs;
    objs.reserve(pop.size());
    for (auto const& mt : pop) {
        objs.push_back(mt.objectives);
    }
    Ranking r { std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size()), nds_sort(objs) };
    for (std::size_t f = 0; f < r.fronts.size(); ++f) {
        auto const cd = crowding_distance(objs, r.fronts[f]);
        for (std::size_t i = 0; i < r.fronts[f].size(); ++i) {
            r.rank[r.fronts[f][i]] = f;
            r.crowding[r.fronts[f][i]] = cd[i];
        }
    }
    return r;
}

bool better(Ranking const& r, std::size_t i, std::size_t j)
{
    if (r.rank[i] != r.rank[j]) {
        return r.rank[i] < r.rank[j];
    }
    return r.crowding[i] > r.crowding[j];
}

std::size_t tournament(Ranking const& r, std::size_t size, std::size_t n, Rng& rng)
{
    auto best = rng.below(n);
    for (std::size_t t = 1; t < size; ++t) {
        auto const c = rng.below(n);
        if (better(r, c, best)) {
            best = c;
        }
    }
    return best;
}

// Elitist (mu + lambda) truncation by rank, then crowding within the last front.
std::vector<VarMultiTree> select_survivors(std::vector<VarMultiTree> combined, std::size_t keep)
{
    auto const r = rank_population(combined);
    std::vector<VarMultiTree> next;
    next.reserve(keep);
    for (auto const& front : r.fronts) {
        if (next.size() + front.size() <= keep) {
            for (auto i : front) {
                next.push_back(std::move(combined[i]));
            }
            continue;
        }
        std::vector<std::size_t> order(front.begin(), front.end());
        std::stable_sort(
            order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return r.crowding[i] > r.crowding[j]; });
        for (std::size_t i = 0; next.size() < keep; ++i) {
            next.push_back(std::move(combined[order[i]]));
        }
        break;
    }
    return next;
}

std::vector<VarMultiTree> first_front(std::span<VarMultiTree const> pop)
{
    std::vector<VarMultiTree> out;
    auto const ranking = rank_population(pop);
    for (auto i : ranking.fronts.front()) {
        auto const dup = std::any_of(out.begin(), out.end(), [&](auto const& m) { return m.objectives == pop[i].objectives; });
        if (!dup) {
            out.push_back(pop[i]);
        }
    }
    return out;
}

} // namespace

Nsga2Result run_nsga2(Nsga2Config const& cfg, Dataset const& train)
{
    cfg.validate();
    Rng rng(cfg.seed);
    auto const prims = PrimitiveSet::for_dataset(train, cfg.use_erc);
    auto pop = init_ramped(cfg.population_size, cfg.trees, cfg.max_size, prims, rng);
    evaluate_all(pop, train, cfg.objectives, cfg.threads);

    Nsga2Result res;
    res.evaluations = pop.size();
    Budget const budget(cfg.termination);
    auto const e_index = std::find(cfg.objectives.begin(), cfg.objectives.end(), Objective::E);
    auto const d_index = std::find(cfg.objectives.begin(), cfg.objectives.end(), Objective::D1);

    auto record = [&](std::size_t gen) {
        auto const front = first_front(pop);
        std::vector<ObjectiveVector> objs;
        for (auto const& m : front) {
            objs.push_back(m.objectives);
        }
        GenerationStats s;
        s.generation = gen;
        s.evaluations = res.evaluations;
        s.archive_size = front.size();
        std::vector<std::vector<ObjectiveVector>> one { objs };
        s.hv_proxy = hypervolume_2d(project(normalize_fronts(one).fronts.front(), 0, 1));
        auto best_of = [&](auto it) -> std::optional<double> {
            if (it == cfg.objectives.end()) {
                return std::nullopt;
            }
            auto const m = static_cast<std::size_t>(it - cfg.objectives.begin());
            double best = std::numeric_limits<double>::infinity();
            for (auto const& o : objs) {
                best = std::min(best, o[m]);
            }
            return best;
        };
        s.best_e = best_of(e_index);
        s.best_d1 = best_of(d_index);
        res.history.push_back(s);
        if (cfg.progress != nullptr) {
            *cfg.progress << "gen " << gen << " evals " << s.evaluations << " front " << s.archive_size;
            if (s.best_e) {
                *cfg.progress << " best_E " << std::setprecision(6) << *s.best_e;
            }
            if (s.best_d1) {
                *cfg.progress << " best_D1 " << std::setprecision(6) << *s.best_d1;
            }
            *cfg.progress << '\n';
        }
    };
    record(0);

    std::size_t gen = 0;
    while (!budget.exhausted(gen, res.evaluations)) {
        auto const ranking = rank_population(pop);
        std::vector<VarMultiTree> offspring;
        offspring.reserve(cfg.population_size);
        while (offspring.size() < cfg.population_size) {
            auto const& a = pop[tournament(ranking, cfg.tournament, pop.size(), rng)];
            auto const& b = pop[tournament(ranking, cfg.tournament, pop.size(), rng)];
            auto [c, d] = variate(a, b, cfg.rates, cfg.max_size, prims, rng);
            offspring.push_back(std::move(c));
            if (offspring.size() < cfg.population_size) {
                offspring.push_back(std::move(d));
            }
        }
        evaluate_all(offspring, train, cfg.objectives, cfg.threads);
        res.evaluations += offspring.size();

        std::vector<VarMultiTree> combined = std::move(pop);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
            std::make_move_iterator(offspring.end()));
        pop = select_survivors(std::move(combined), cfg.population_size);
        ++gen;
        record(gen);
    }
    res.front = first_front(pop);
    res.generations = gen;
    return res;
}

} // namespace mmgp
