#include "mmgp/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mmgp {

std::vector<ObjectiveVector> pareto_filter(std::span<ObjectiveVector const> points)
{
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (j == i) {
                continue;
            }
            if (dominates(points[j], points[i]) || (j < i && points[j] == points[i])) {
                keep = false;
            }
        }
        if (keep) {
            out.push_back(points[i]);
        }
    }
    return out;
}

ObjectiveVector NormalizationBounds::apply(ObjectiveVector const& v) const
{
    std::vector<double> out(v.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        double const range = hi[d] - lo[d];
        out[d] = range > 0.0 ? (v[d] - lo[d]) / range : 0.0;
    }
    return ObjectiveVector(std::move(out));
}

NormalizedFront NormalizedFront::assume_normalized(std::vector<ObjectiveVector> points)
{
    return NormalizedFront(std::move(points));
}

NormalizationBounds front_of_fronts_bounds(std::span<std::vector<ObjectiveVector> const> fronts)
{
    std::vector<ObjectiveVector> all;
    for (auto const& f : fronts) {
        all.insert(all.end(), f.begin(), f.end());
    }
    if (all.empty()) {
        throw std::invalid_argument("normalize_fronts: all fronts are empty");
    }
    auto const joint = pareto_filter(all);
    auto const dims = joint.front().size();
    NormalizationBounds b { std::vector<double>(dims, std::numeric_limits<double>::infinity()),
        std::vector<double>(dims, -std::numeric_limits<double>::infinity()) };
    for (auto const& p : joint) {
        for (std::size_t d = 0; d < dims; ++d) {
            b.lo[d] = std::min(b.lo[d], p[d]);
            b.hi[d] = std::max(b.hi[d], p[d]);
        }
    }
    return b;
}

NormalizedFront normalize_front(std::span<ObjectiveVector const> front, NormalizationBounds const& bounds)
{
    std::vector<ObjectiveVector> out;
    out.reserve(front.size());
    for (auto const& p : front) {
        out.push_back(bounds.apply(p));
    }
    return NormalizedFront(std::move(out));
}

NormalizedFronts normalize_fronts(std::span<std::vector<ObjectiveVector> const> fronts)
{
    NormalizedFronts result { {}, front_of_fronts_bounds(fronts) };
    for (auto const& f : fronts) {
        result.fronts.push_back(normalize_front(f, result.bounds));
    }
    return result;
}

double hypervolume_2d(NormalizedFront const& front, std::array<double, 2> reference)
{
    std::vector<ObjectiveVector> inside;
    for (auto const& p : front.points()) {
        if (p.size() != 2) {
            throw std::invalid_argument("hypervolume_2d: points must have two objectives");
        }
        if (p[0] < reference[0] && p[1] < reference[1]) {
            inside.push_back(p);
        }
    }
    auto pts = pareto_filter(inside);
    std::sort(pts.begin(), pts.end(), [](auto const& a, auto const& b) { return a[0] < b[0]; });

    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double const next_x = i + 1 < pts.size() ? pts[i + 1][0] : reference[0];
        area += (next_x - pts[i][0]) * (reference[1] - pts[i][1]);
    }
    return area;
}

NormalizedFront project(NormalizedFront const& front, std::size_t first, std::size_t second)
{
    std::vector<ObjectiveVector> out;
    for (auto const& p : front.points()) {
        out.push_back(ObjectiveVector { p[first], p[second] });
    }
    return NormalizedFront::assume_normalized(std::move(out));
}

} // namespace mmgp
