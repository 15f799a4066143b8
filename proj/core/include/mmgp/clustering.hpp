#pragma once

#include "mmgp/objective_vector.hpp"
#include "mmgp/random.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mmgp {

struct ClusterAssignment {
    std::size_t k = 0;
    // cluster centers in normalized objective space
    std::vector<std::vector<double>> centers;
    // the ceil(2N/k) individuals nearest each center; these sets overlap
    std::vector<std::vector<std::size_t>> balanced;
    // final unique cluster of each individual
    std::vector<std::size_t> membership;
    // per objective: the cluster that specializes in it, if any
    std::vector<std::optional<std::size_t>> extreme;

    std::vector<std::size_t> members(std::size_t cluster) const;
    std::optional<std::size_t> extreme_objective(std::size_t cluster) const;
};

// Per-objective min-max normalization over the given points. A constant
// objective maps to 0 for every point.
std::vector<std::vector<double>> normalize_objectives(std::span<ObjectiveVector const> points);

// Balanced k-leader-means clustering in normalized objective space.
// Throws std::invalid_argument when k < 1 or there are fewer points than k.
ClusterAssignment bklm_cluster(std::span<ObjectiveVector const> points, std::size_t k, Rng& rng);

// Visits the objectives in random order; each claims the not yet claimed
// cluster whose balanced member set has the lowest mean raw value of that
// objective.
void determine_extreme_clusters(ClusterAssignment& assignment, std::span<ObjectiveVector const> points, Rng& rng);

} // namespace mmgp
