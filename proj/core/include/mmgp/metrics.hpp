#pragma once

#include "mmgp/objective_vector.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mmgp {

// Points not dominated by any other point; exact duplicates collapse to
// their first occurrence. Input order is preserved.
std::vector<ObjectiveVector> pareto_filter(std::span<ObjectiveVector const> points);

struct NormalizationBounds {
    std::vector<double> lo;
    std::vector<double> hi;

    ObjectiveVector apply(ObjectiveVector const& v) const;
};

// A front expressed in normalized objective units. Only normalize_fronts
// and the explicit assume_normalized factory produce one, so raw objective
// values cannot reach the hypervolume by accident.
class NormalizedFront {
public:
    static NormalizedFront assume_normalized(std::vector<ObjectiveVector> points);

    std::span<ObjectiveVector const> points() const { return points_; }
    std::size_t size() const { return points_.size(); }

private:
    friend NormalizedFront normalize_front(std::span<ObjectiveVector const>, NormalizationBounds const&);
    explicit NormalizedFront(std::vector<ObjectiveVector> points)
        : points_(std::move(points))
    {
    }
    std::vector<ObjectiveVector> points_;
};

struct NormalizedFronts {
    std::vector<NormalizedFront> fronts;
    NormalizationBounds bounds;
};

// Bounds = per-objective min/max of the non-dominated union of all fronts
// (the front of fronts); each value maps to (v - min) / (max - min), or 0
// when max == min. Throws std::invalid_argument when every front is empty.
NormalizationBounds front_of_fronts_bounds(std::span<std::vector<ObjectiveVector> const> fronts);
NormalizedFronts normalize_fronts(std::span<std::vector<ObjectiveVector> const> fronts);
NormalizedFront normalize_front(std::span<ObjectiveVector const> front, NormalizationBounds const& bounds);

inline constexpr std::array<double, 2> default_reference { 1.1, 1.1 };

// Area dominated by the front inside the box below the reference point.
// Points outside the box contribute nothing. Two objectives only.
double hypervolume_2d(NormalizedFront const& front, std::array<double, 2> reference = default_reference);

// The two given objectives of every point, for per-pair reporting in runs
// with more than two objectives.
NormalizedFront project(NormalizedFront const& front, std::size_t first, std::size_t second);

} // namespace mmgp
