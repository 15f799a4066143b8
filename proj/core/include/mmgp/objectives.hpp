#pragma once

#include "mmgp/dataset.hpp"
#include "mmgp/multitree.hpp"
#include "mmgp/objective_vector.hpp"

#include <span>
#include <vector>

namespace mmgp {

// Squared residuals and objective values are capped here so that a tree
// whose arithmetic overflows still gets a finite (very bad) score.
inline constexpr double objective_cap = 1e100;

using Semantics = std::vector<std::vector<double>>;
// One prediction vector per tree.
using SemanticsView = std::span<std::span<double const> const>;

std::vector<std::span<double const>> view_of(Semantics const& sem);
std::vector<std::span<double const>> view_of(MultiTree const& mt, Dataset const& ds);

double mse(std::span<double const> predictions, std::span<double const> targets);

// Sum over trees of the per-tree MSE.
double error_e(SemanticsView sem, std::span<double const> targets);
// Mean over records of the smallest squared error among all trees.
double diversified_d1(SemanticsView sem, std::span<double const> targets);
// Mean over tree pairs of the pairwise per-record minimum squared error mean.
double diversified_d2(SemanticsView sem, std::span<double const> targets);

inline double error_e(Semantics const& sem, std::span<double const> y) { return error_e(view_of(sem), y); }
inline double diversified_d1(Semantics const& sem, std::span<double const> y) { return diversified_d1(view_of(sem), y); }
inline double diversified_d2(Semantics const& sem, std::span<double const> y) { return diversified_d2(view_of(sem), y); }

double error_e(MultiTree const& mt, Dataset const& ds);
double diversified_d1(MultiTree const& mt, Dataset const& ds);
double diversified_d2(MultiTree const& mt, Dataset const& ds);

ObjectiveVector evaluate_objectives(SemanticsView sem, std::span<double const> targets, std::span<Objective const> set);
ObjectiveVector evaluate_objectives(MultiTree const& mt, Dataset const& ds, std::span<Objective const> set);

std::vector<double> per_tree_mse(SemanticsView sem, std::span<double const> targets);

} // namespace mmgp
