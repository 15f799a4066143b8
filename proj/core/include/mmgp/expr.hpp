#pragma once

#include "mmgp/dataset.hpp"
#include "mmgp/random.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mmgp {

enum class SymbolKind : std::uint8_t { Plus, Minus, Times, Div, Variable, Constant };

// One gene: a binary function, a feature reference or an ephemeral constant.
struct NodeSymbol {
    SymbolKind kind = SymbolKind::Constant;
    std::uint32_t variable = 0;
    double value = 0.0;

    static constexpr NodeSymbol function(SymbolKind k) { return { k, 0, 0.0 }; }
    static constexpr NodeSymbol feature(std::uint32_t index) { return { SymbolKind::Variable, index, 0.0 }; }
    static constexpr NodeSymbol constant(double v) { return { SymbolKind::Constant, 0, v }; }

    constexpr bool is_function() const { return kind < SymbolKind::Variable; }
    constexpr bool is_terminal() const { return !is_function(); }

    friend constexpr bool operator==(NodeSymbol const& a, NodeSymbol const& b)
    {
        if (a.kind != b.kind) {
            return false;
        }
        if (a.kind == SymbolKind::Variable) {
            return a.variable == b.variable;
        }
        if (a.kind == SymbolKind::Constant) {
            return a.value == b.value;
        }
        return true;
    }
};

// sign(b) * a / max(|b|, 1e-6), with sign(0) = +1.
inline double protected_div(double a, double b)
{
    constexpr double floor = 1e-6;
    double const mag = b < 0 ? -b : b;
    double const den = mag < floor ? floor : mag;
    return (b < 0 ? -a : a) / den;
}

// Full binary tree with `height` levels, so 2^height - 1 positions (height 3
// gives 7). Positions are numbered in depth-first preorder, root = 0.
class TreeTemplate {
public:
    explicit TreeTemplate(unsigned height = 3);

    unsigned height() const { return height_; }
    std::size_t length() const { return layout_->depth.size(); }

    unsigned depth(std::size_t pos) const { return layout_->depth[pos]; }
    bool is_leaf(std::size_t pos) const { return depth(pos) + 1 == height_; }
    std::size_t left(std::size_t pos) const { return pos + 1; }
    std::size_t right(std::size_t pos) const { return pos + (std::size_t { 1 } << (height_ - 1 - depth(pos))); }
    // one past the last position of the subtree rooted at pos
    std::size_t subtree_end(std::size_t pos) const { return pos + (std::size_t { 1 } << (height_ - depth(pos))) - 1; }

    friend bool operator==(TreeTemplate const& a, TreeTemplate const& b) { return a.height_ == b.height_; }

private:
    struct Layout {
        std::vector<unsigned> depth;
    };
    unsigned height_;
    std::shared_ptr<Layout const> layout_;
};

// Functions and terminals a tree may draw from. Terminals are the feature
// variables plus, when enabled, one ERC terminal that samples a fresh
// constant uniformly from [erc_min, erc_max].
struct PrimitiveSet {
    std::vector<SymbolKind> functions { SymbolKind::Plus, SymbolKind::Minus, SymbolKind::Times, SymbolKind::Div };
    std::size_t variables = 1;
    bool erc = true;
    double erc_min = -1.0;
    double erc_max = 1.0;

    std::size_t terminal_count() const { return variables + (erc ? 1 : 0); }

    // ERC range taken from the training targets.
    static PrimitiveSet for_dataset(Dataset const& train, bool use_erc = true);

    NodeSymbol sample_terminal(Rng& rng) const;
    NodeSymbol sample_any(Rng& rng) const;
};

struct Genotype {
    TreeTemplate shape;
    std::vector<NodeSymbol> symbols;
};

void sample_random(TreeTemplate const& shape, PrimitiveSet const& prims, Rng& rng, std::span<NodeSymbol> out);
Genotype sample_random(TreeTemplate const& shape, PrimitiveSet const& prims, Rng& rng);

// Marks the positions reachable from the root; children of a terminal are introns.
std::vector<bool> expressed_positions(TreeTemplate const& shape, std::span<NodeSymbol const> symbols);

void evaluate(TreeTemplate const& shape, std::span<NodeSymbol const> symbols, Dataset const& ds, std::span<double> out);
std::vector<double> evaluate(Genotype const& g, Dataset const& ds);

std::string symbol_label(NodeSymbol const& s);
std::string to_infix(TreeTemplate const& shape, std::span<NodeSymbol const> symbols);
std::string to_infix(Genotype const& g);

} // namespace mmgp
