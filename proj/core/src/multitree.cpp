#include "mmgp/multitree.hpp"

#include <cmath>
#include <stdexcept>

namespace mmgp {

GeneLocation locate_gene(std::size_t index, std::size_t length, std::size_t trees)
{
    if (length == 0 || index >= length * trees) {
        throw std::out_of_range("gene index out of range");
    }
    return { index / length, index % length };
}

std::size_t global_index(GeneLocation loc, std::size_t length) { return loc.tree * length + loc.position; }

MultiTree::MultiTree(TreeTemplate shape, std::size_t trees)
    : MultiTree(shape, trees, std::vector<NodeSymbol>(shape.length() * trees))
{
}

MultiTree::MultiTree(TreeTemplate shape, std::size_t trees, std::vector<NodeSymbol> genes)
    : shape_(std::move(shape))
    , trees_(trees)
    , genes_(std::move(genes))
    , cache_(trees)
{
    if (trees_ == 0) {
        throw std::invalid_argument("a multi-tree needs at least one tree");
    }
    if (genes_.size() != trees_ * shape_.length()) {
        throw std::invalid_argument("gene count does not match trees * template length");
    }
    for (std::size_t i = 0; i < genes_.size(); ++i) {
        if (genes_[i].is_function() && shape_.is_leaf(i % shape_.length())) {
            throw std::invalid_argument("function symbol at a leaf position");
        }
    }
}

MultiTree MultiTree::random(TreeTemplate const& shape, std::size_t trees, PrimitiveSet const& prims, Rng& rng)
{
    MultiTree mt(shape, trees);
    std::span<NodeSymbol> all(mt.genes_);
    for (std::size_t k = 0; k < trees; ++k) {
        sample_random(shape, prims, rng, all.subspan(k * shape.length(), shape.length()));
    }
    return mt;
}

std::span<NodeSymbol const> MultiTree::tree(std::size_t k) const
{
    if (k >= trees_) {
        throw std::out_of_range("tree index out of range");
    }
    return std::span<NodeSymbol const>(genes_).subspan(k * tree_length(), tree_length());
}

Genotype MultiTree::genotype(std::size_t k) const
{
    auto const t = tree(k);
    return Genotype { shape_, std::vector<NodeSymbol>(t.begin(), t.end()) };
}

bool MultiTree::set_gene(std::size_t i, NodeSymbol const& s)
{
    auto& slot = genes_.at(i);
    if (slot == s) {
        return false;
    }
    slot = s;
    cache_[i / tree_length()].dataset = 0;
    objectives_.reset();
    return true;
}

std::vector<double> const& MultiTree::semantics(std::size_t k, Dataset const& ds) const
{
    auto& c = cache_.at(k);
    if (c.dataset != ds.id()) {
        c.values.resize(ds.rows());
        evaluate(shape_, tree(k), ds, c.values);
        c.dataset = ds.id();
    }
    return c.values;
}

std::vector<std::vector<double>> MultiTree::semantics(Dataset const& ds) const
{
    std::vector<std::vector<double>> out;
    out.reserve(trees_);
    for (std::size_t k = 0; k < trees_; ++k) {
        out.push_back(semantics(k, ds));
    }
    return out;
}

bool replace_genes(MultiTree& recipient, MultiTree const& donor, std::span<std::size_t const> subset)
{
    if (!(recipient.shape() == donor.shape()) || recipient.trees() != donor.trees()) {
        throw std::invalid_argument("replace_genes: multi-trees differ in shape");
    }
    bool changed = false;
    for (auto i : subset) {
        changed = recipient.set_gene(i, donor.gene(i)) || changed;
    }
    return changed;
}

std::vector<std::vector<double>> semantics(MultiTree const& mt, Dataset const& ds) { return mt.semantics(ds); }

bool semantically_equal(MultiTree const& a, MultiTree const& b, Dataset const& ds)
{
    if (a.trees() != b.trees()) {
        return false;
    }
    for (std::size_t k = 0; k < a.trees(); ++k) {
        auto const& sa = a.semantics(k, ds);
        auto const& sb = b.semantics(k, ds);
        for (std::size_t i = 0; i < sa.size(); ++i) {
            bool const same = sa[i] == sb[i] || std::abs(sa[i] - sb[i]) <= semantic_tolerance
                || (std::isnan(sa[i]) && std::isnan(sb[i]));
            if (!same) {
                return false;
            }
        }
    }
    return true;
}

} // namespace mmgp
