#pragma once

#include "mmgp/multitree.hpp"
#include "mmgp/random.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace mmgp {

// Family of subsets of global gene indices (0-based).
using Fos = std::vector<std::vector<std::size_t>>;

// Symmetric pairwise gene similarity with a zero diagonal.
class SimilarityMatrix {
public:
    explicit SimilarityMatrix(std::size_t size = 0)
        : size_(size)
        , values_(size * size, 0.0)
    {
    }

    std::size_t size() const { return size_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
    void set(std::size_t i, std::size_t j, double v)
    {
        values_[i * size_ + j] = v;
        values_[j * size_ + i] = v;
    }

private:
    std::size_t size_;
    std::vector<double> values_;
};

// Class of a gene for frequency counting: one class per function, one per
// variable index, and a single class for all constants.
std::size_t symbol_class(NodeSymbol const& s);

// Pairwise mutual information between gene positions over the population,
// normalized as MI(i, j) / max(H(i), H(j)) with 0/0 -> 0.
SimilarityMatrix estimate_mi(std::span<MultiTree const* const> population);

// UPGMA (average linkage) over the given gene universe. Starts from the
// singletons and records every merge; the subset holding the full universe is
// kept only when keep_root is set. Ties between equally similar cluster pairs
// are broken uniformly at random.
Fos build_linkage_tree(SimilarityMatrix const& sim, std::span<std::size_t const> universe, bool keep_root, Rng& rng);

// Union of the linkage tree over all n * L genes (root dropped) and one
// linkage tree per tree (root kept, so whole trees can be exchanged).
Fos build_multitree_fos(std::span<MultiTree const* const> population, std::size_t trees, std::size_t length, Rng& rng);

// Debug dump: one subset per line, 1-based indices separated by spaces.
void write_fos(Fos const& fos, std::ostream& out);

} // namespace mmgp
