#pragma once

#include "mmgp/budget.hpp"
#include "mmgp/dataset.hpp"
#include "mmgp/expr.hpp"
#include "mmgp/objective_vector.hpp"
#include "mmgp/random.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mmgp {

// Variable-shape expression tree stored in prefix order.
struct VarTree {
    std::vector<NodeSymbol> nodes;

    std::size_t size() const { return nodes.size(); }
    // one past the last node of the subtree rooted at pos
    std::size_t subtree_end(std::size_t pos) const;
    unsigned depth() const;
    // every function has two children and the encoding is complete
    bool well_formed() const;
};

std::vector<double> evaluate(VarTree const& tree, Dataset const& ds);
std::string to_infix(VarTree const& tree);

struct VarMultiTree {
    std::vector<VarTree> trees;
    ObjectiveVector objectives;
};

std::vector<std::vector<double>> semantics(VarMultiTree const& mt, Dataset const& ds);

// Largest depth whose full tree has at most max_size nodes.
unsigned max_full_depth(std::size_t max_size);

// Grow picks any primitive above the depth limit; full uses functions only.
VarTree generate_tree(PrimitiveSet const& prims, unsigned depth, bool full, Rng& rng);

// Ramped half-and-half: depths cycle through 1..max_full_depth (0 when only a
// terminal fits), even indices grow and odd indices full.
std::vector<VarMultiTree> init_ramped(
    std::size_t pop_size, std::size_t trees, std::size_t max_size, PrimitiveSet const& prims, Rng& rng);

struct VariationRates {
    double crossover = 0.5;
    double mutation = 0.5;
};

// Per tree slot: with probability `crossover` swap uniformly chosen subtrees
// between the two parents' trees in that slot, else with probability
// `mutation` replace a uniform subtree of each child with a fresh grown one,
// else copy. Oversize crossover children keep the parent tree.
std::pair<VarMultiTree, VarMultiTree> variate(VarMultiTree const& a, VarMultiTree const& b, VariationRates rates,
    std::size_t max_size, PrimitiveSet const& prims, Rng& rng);

// Fast non-dominated sorting; front 0 is the non-dominated set.
std::vector<std::vector<std::size_t>> nds_sort(std::span<ObjectiveVector const> points);

// Crowding distance of each member of `front`, boundary points infinite.
std::vector<double> crowding_distance(std::span<ObjectiveVector const> points, std::span<std::size_t const> front);

struct Nsga2Config {
    std::size_t population_size = 15000;
    std::size_t trees = 2;
    std::size_t max_size = 7;
    VariationRates rates;
    std::size_t tournament = 4;
    std::vector<Objective> objectives { Objective::E, Objective::D1 };
    Termination termination;
    std::uint64_t seed = 0;
    bool use_erc = true;
    std::size_t threads = 1;
    std::ostream* progress = nullptr;

    void validate() const;
};

struct Nsga2Result {
    // first front of the final population, duplicate objective vectors removed
    std::vector<VarMultiTree> front;
    RunHistory history;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

Nsga2Result run_nsga2(Nsga2Config const& cfg, Dataset const& train);

} // namespace mmgp
