#include "mmgp/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace mmgp {

namespace {

constexpr std::size_t constant_class = 4;

double entropy_from_counts(std::span<std::size_t const> counts, std::size_t total)
{
    double h = 0.0;
    auto const n = static_cast<double>(total);
    for (auto c : counts) {
        if (c > 0) {
            double const p = static_cast<double>(c) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

} // namespace

std::size_t symbol_class(NodeSymbol const& s)
{
    switch (s.kind) {
    case SymbolKind::Plus:
        return 0;
    case SymbolKind::Minus:
        return 1;
    case SymbolKind::Times:
        return 2;
    case SymbolKind::Div:
        return 3;
    case SymbolKind::Constant:
        return constant_class;
    case SymbolKind::Variable:
        return constant_class + 1 + s.variable;
    }
    return constant_class;
}

SimilarityMatrix estimate_mi(std::span<MultiTree const* const> population)
{
    if (population.empty()) {
        throw std::invalid_argument("estimate_mi: empty population");
    }
    auto const genes = population.front()->size();
    auto const p = population.size();

    // classes[g * p + i] = class of gene g in individual i
    std::vector<std::size_t> classes(genes * p);
    std::size_t n_classes = constant_class + 1;
    for (std::size_t i = 0; i < p; ++i) {
        if (population[i]->size() != genes) {
            throw std::invalid_argument("estimate_mi: genotype lengths differ");
        }
        for (std::size_t g = 0; g < genes; ++g) {
            auto const c = symbol_class(population[i]->gene(g));
            classes[g * p + i] = c;
            n_classes = std::max(n_classes, c + 1);
        }
    }

    std::vector<double> entropy(genes);
    std::vector<std::size_t> counts(n_classes);
    for (std::size_t g = 0; g < genes; ++g) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < p; ++i) {
            ++counts[classes[g * p + i]];
        }
        entropy[g] = entropy_from_counts(counts, p);
    }

    SimilarityMatrix sim(genes);
    std::vector<std::size_t> joint(n_classes * n_classes, 0);
    std::vector<std::size_t> touched;
    std::vector<std::size_t> nonzero;
    for (std::size_t a = 0; a < genes; ++a) {
        for (std::size_t b = a + 1; b < genes; ++b) {
            double const h_max = std::max(entropy[a], entropy[b]);
            if (h_max <= 0.0) {
                continue;
            }
            touched.clear();
            for (std::size_t i = 0; i < p; ++i) {
                auto const key = classes[a * p + i] * n_classes + classes[b * p + i];
                if (joint[key]++ == 0) {
                    touched.push_back(key);
                }
            }
            nonzero.clear();
            for (auto key : touched) {
                nonzero.push_back(joint[key]);
                joint[key] = 0;
            }
            double const h_joint = entropy_from_counts(nonzero, p);
            double const mi = entropy[a] + entropy[b] - h_joint;
            sim.set(a, b, std::clamp(mi / h_max, 0.0, 1.0));
        }
    }
    return sim;
}

Fos build_linkage_tree(SimilarityMatrix const& sim, std::span<std::size_t const> universe, bool keep_root, Rng& rng)
{
    auto const m = universe.size();
    Fos fos;
    if (m == 0) {
        return fos;
    }
    for (auto g : universe) {
        if (g >= sim.size()) {
            throw std::out_of_range("build_linkage_tree: index outside similarity matrix");
        }
    }

    // Cluster-to-cluster average similarity, maintained with the
    // size-weighted Lance-Williams update.
    std::vector<std::vector<std::size_t>> members(m);
    std::vector<double> link(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        members[a] = { universe[a] };
        for (std::size_t b = 0; b < m; ++b) {
            link[a * m + b] = sim(universe[a], universe[b]);
        }
    }
    std::vector<std::size_t> active(m);
    std::iota(active.begin(), active.end(), 0);

    if (keep_root || m > 1) {
        for (auto const& s : members) {
            fos.push_back(s);
        }
    }

    std::size_t const stop_at = keep_root ? 1 : 2;
    std::vector<std::pair<std::size_t, std::size_t>> best_pairs;
    while (active.size() > stop_at) {
        double best = -1.0;
        best_pairs.clear();
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                double const v = link[active[x] * m + active[y]];
                if (v > best) {
                    best = v;
                    best_pairs.clear();
                }
                if (v == best) {
                    best_pairs.emplace_back(x, y);
                }
            }
        }
        auto const [x, y] = best_pairs[best_pairs.size() == 1 ? 0 : rng.below(best_pairs.size())];
        auto const a = active[x];
        auto const b = active[y];

        auto const wa = static_cast<double>(members[a].size());
        auto const wb = static_cast<double>(members[b].size());
        for (auto c : active) {
            if (c == a || c == b) {
                continue;
            }
            double const v = (wa * link[a * m + c] + wb * link[b * m + c]) / (wa + wb);
            link[a * m + c] = v;
            link[c * m + a] = v;
        }
        // merged cluster reuses slot a
        members[a].insert(members[a].end(), members[b].begin(), members[b].end());
        std::sort(members[a].begin(), members[a].end());
        members[b].clear();
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(y));
        fos.push_back(members[a]);
    }
    return fos;
}

Fos build_multitree_fos(std::span<MultiTree const* const> population, std::size_t trees, std::size_t length, Rng& rng)
{
    auto const sim = estimate_mi(population);
    if (sim.size() != trees * length) {
        throw std::invalid_argument("build_multitree_fos: population does not match trees * length");
    }

    std::vector<std::size_t> all(trees * length);
    std::iota(all.begin(), all.end(), 0);
    if (trees == 1) {
        return build_linkage_tree(sim, all, true, rng);
    }

    Fos fos;
    std::set<std::vector<std::size_t>> seen;
    auto append = [&](Fos const& part) {
        for (auto const& s : part) {
            if (seen.insert(s).second) {
                fos.push_back(s);
            }
        }
    };
    append(build_linkage_tree(sim, all, false, rng));
    for (std::size_t k = 0; k < trees; ++k) {
        std::span<std::size_t const> own(all.data() + k * length, length);
        append(build_linkage_tree(sim, own, true, rng));
    }
    return fos;
}

void write_fos(Fos const& fos, std::ostream& out)
{
    for (auto const& s : fos) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << (i ? " " : "") << (s[i] + 1);
        }
        out << '\n';
    }
}

} // namespace mmgp
