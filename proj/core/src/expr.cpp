#include "mmgp/expr.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace mmgp {

TreeTemplate::TreeTemplate(unsigned height)
    : height_(height)
{
    if (height < 1 || height > 20) {
        throw std::invalid_argument("tree height must lie in [1, 20]");
    }
    auto layout = std::make_shared<Layout>();
    std::size_t const length = (std::size_t { 1 } << height) - 1;
    layout->depth.reserve(length);
    // preorder walk of the full tree records each node's depth
    auto visit = [&](auto&& self, unsigned d) -> void {
        layout->depth.push_back(d);
        if (d + 1 < height) {
            self(self, d + 1);
            self(self, d + 1);
        }
    };
    visit(visit, 0);
    layout_ = std::move(layout);
}

PrimitiveSet PrimitiveSet::for_dataset(Dataset const& train, bool use_erc)
{
    PrimitiveSet p;
    p.variables = train.features();
    p.erc = use_erc;
    p.erc_min = train.target_min();
    p.erc_max = train.target_max();
    return p;
}

NodeSymbol PrimitiveSet::sample_terminal(Rng& rng) const
{
    auto const n = terminal_count();
    if (n == 0) {
        throw std::logic_error("primitive set has no terminals");
    }
    auto const pick = rng.below(n);
    if (pick < variables) {
        return NodeSymbol::feature(static_cast<std::uint32_t>(pick));
    }
    return NodeSymbol::constant(rng.uniform(erc_min, erc_max));
}

NodeSymbol PrimitiveSet::sample_any(Rng& rng) const
{
    auto const pick = rng.below(functions.size() + terminal_count());
    if (pick < functions.size()) {
        return NodeSymbol::function(functions[pick]);
    }
    auto const t = pick - functions.size();
    if (t < variables) {
        return NodeSymbol::feature(static_cast<std::uint32_t>(t));
    }
    return NodeSymbol::constant(rng.uniform(erc_min, erc_max));
}

void sample_random(TreeTemplate const& shape, PrimitiveSet const& prims, Rng& rng, std::span<NodeSymbol> out)
{
    if (out.size() != shape.length()) {
        throw std::invalid_argument("output span does not match template length");
    }
    for (std::size_t pos = 0; pos < out.size(); ++pos) {
        out[pos] = shape.is_leaf(pos) ? prims.sample_terminal(rng) : prims.sample_any(rng);
    }
}

Genotype sample_random(TreeTemplate const& shape, PrimitiveSet const& prims, Rng& rng)
{
    Genotype g { shape, std::vector<NodeSymbol>(shape.length()) };
    sample_random(shape, prims, rng, g.symbols);
    return g;
}

std::vector<bool> expressed_positions(TreeTemplate const& shape, std::span<NodeSymbol const> symbols)
{
    std::vector<bool> expressed(shape.length(), false);
    std::size_t pos = 0;
    while (pos < shape.length()) {
        expressed[pos] = true;
        // a terminal hides its whole subtree; a function descends to its left child
        pos = symbols[pos].is_function() ? pos + 1 : shape.subtree_end(pos);
    }
    return expressed;
}

void evaluate(TreeTemplate const& shape, std::span<NodeSymbol const> symbols, Dataset const& ds, std::span<double> out)
{
    auto const rows = ds.rows();
    if (out.size() != rows) {
        throw std::invalid_argument("output span does not match record count");
    }
    auto const length = shape.length();
    auto const expressed = expressed_positions(shape, symbols);

    thread_local std::vector<double> scratch;
    scratch.resize(length * rows);
    std::vector<double const*> value(length, nullptr);

    for (std::size_t p = length; p-- > 0;) {
        if (!expressed[p]) {
            continue;
        }
        auto const& s = symbols[p];
        double* buf = scratch.data() + p * rows;
        switch (s.kind) {
        case SymbolKind::Variable:
            if (s.variable >= ds.features()) {
                throw std::out_of_range("variable index exceeds dataset feature count");
            }
            value[p] = ds.column(s.variable).data();
            continue;
        case SymbolKind::Constant:
            std::fill_n(buf, rows, s.value);
            break;
        default: {
            double const* a = value[shape.left(p)];
            double const* b = value[shape.right(p)];
            switch (s.kind) {
            case SymbolKind::Plus:
                for (std::size_t i = 0; i < rows; ++i) buf[i] = a[i] + b[i];
                break;
            case SymbolKind::Minus:
                for (std::size_t i = 0; i < rows; ++i) buf[i] = a[i] - b[i];
                break;
            case SymbolKind::Times:
                for (std::size_t i = 0; i < rows; ++i) buf[i] = a[i] * b[i];
                break;
            case SymbolKind::Div:
                for (std::size_t i = 0; i < rows; ++i) buf[i] = protected_div(a[i], b[i]);
                break;
            default:
                break;
            }
        }
        }
        value[p] = buf;
    }
    std::copy_n(value[0], rows, out.begin());
}

std::vector<double> evaluate(Genotype const& g, Dataset const& ds)
{
    std::vector<double> out(ds.rows());
    evaluate(g.shape, g.symbols, ds, out);
    return out;
}

std::string symbol_label(NodeSymbol const& s)
{
    switch (s.kind) {
    case SymbolKind::Plus:
        return "+";
    case SymbolKind::Minus:
        return "−";
    case SymbolKind::Times:
        return "×";
    case SymbolKind::Div:
        return "÷";
    case SymbolKind::Variable:
        return "x" + std::to_string(s.variable + 1);
    case SymbolKind::Constant: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", s.value);
        return buf;
    }
    }
    return "?";
}

std::string to_infix(TreeTemplate const& shape, std::span<NodeSymbol const> symbols)
{
    auto render = [&](auto&& self, std::size_t pos) -> std::string {
        auto const& s = symbols[pos];
        if (s.is_terminal()) {
            return symbol_label(s);
        }
        return "(" + self(self, shape.left(pos)) + " " + symbol_label(s) + " " + self(self, shape.right(pos)) + ")";
    };
    return render(render, 0);
}

std::string to_infix(Genotype const& g) { return to_infix(g.shape, g.symbols); }

} // namespace mmgp
