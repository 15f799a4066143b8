#pragma once

#include "mmgp/dataset.hpp"
#include "mmgp/expr.hpp"
#include "mmgp/objective_vector.hpp"
#include "mmgp/random.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mmgp {

struct GeneLocation {
    std::size_t tree;
    std::size_t position;

    friend bool operator==(GeneLocation const&, GeneLocation const&) = default;
};

// Global gene index -> (tree, position), all 0-based. Throws std::out_of_range
// when index >= trees * length.
GeneLocation locate_gene(std::size_t index, std::size_t length, std::size_t trees);
std::size_t global_index(GeneLocation loc, std::size_t length);

// n template trees concatenated into one gene string of n * L symbols.
//
// Per-tree semantics and the objective vector are cached; any symbol change
// drops the cache of the tree it touches and the objectives.
class MultiTree {
public:
    MultiTree(TreeTemplate shape, std::size_t trees);
    MultiTree(TreeTemplate shape, std::size_t trees, std::vector<NodeSymbol> genes);

    static MultiTree random(TreeTemplate const& shape, std::size_t trees, PrimitiveSet const& prims, Rng& rng);

    TreeTemplate const& shape() const { return shape_; }
    std::size_t trees() const { return trees_; }
    std::size_t tree_length() const { return shape_.length(); }
    std::size_t size() const { return genes_.size(); }

    std::span<NodeSymbol const> genes() const { return genes_; }
    std::span<NodeSymbol const> tree(std::size_t k) const;
    Genotype genotype(std::size_t k) const;

    NodeSymbol const& gene(std::size_t i) const { return genes_.at(i); }
    // Returns true when the stored symbol actually changed.
    bool set_gene(std::size_t i, NodeSymbol const& s);

    std::vector<double> const& semantics(std::size_t k, Dataset const& ds) const;
    std::vector<std::vector<double>> semantics(Dataset const& ds) const;

    std::optional<ObjectiveVector> const& objectives() const { return objectives_; }
    void set_objectives(ObjectiveVector obj) { objectives_ = std::move(obj); }

private:
    TreeTemplate shape_;
    std::size_t trees_;
    std::vector<NodeSymbol> genes_;

    struct SemanticsCache {
        std::uint64_t dataset = 0;
        std::vector<double> values;
    };
    mutable std::vector<SemanticsCache> cache_;
    std::optional<ObjectiveVector> objectives_;
};

// Copies donor symbols into recipient at the given global indices.
// Returns whether any symbol differed. Throws std::invalid_argument when the
// two multi-trees differ in shape or tree count.
bool replace_genes(MultiTree& recipient, MultiTree const& donor, std::span<std::size_t const> subset);

std::vector<std::vector<double>> semantics(MultiTree const& mt, Dataset const& ds);

inline constexpr double semantic_tolerance = 1e-12;

// Tree-by-tree comparison of prediction vectors, order-sensitive.
bool semantically_equal(MultiTree const& a, MultiTree const& b, Dataset const& ds);

} // namespace mmgp
