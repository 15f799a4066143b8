#include "mmgp/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmgp {

namespace {

double clamp_value(double v) { return std::isfinite(v) ? std::min(v, objective_cap) : objective_cap; }

double squared_error(double prediction, double target)
{
    double const r = prediction - target;
    return clamp_value(r * r);
}

double mean_capped(double sum, std::size_t n) { return clamp_value(sum / static_cast<double>(n)); }

void check_shape(SemanticsView sem, std::span<double const> targets)
{
    if (sem.empty()) {
        throw std::invalid_argument("no trees to score");
    }
    for (auto const& s : sem) {
        if (s.size() != targets.size()) {
            throw std::invalid_argument("prediction length differs from target length");
        }
    }
}

} // namespace

std::vector<std::span<double const>> view_of(Semantics const& sem)
{
    return { sem.begin(), sem.end() };
}

std::vector<std::span<double const>> view_of(MultiTree const& mt, Dataset const& ds)
{
    std::vector<std::span<double const>> out;
    out.reserve(mt.trees());
    for (std::size_t k = 0; k < mt.trees(); ++k) {
        out.emplace_back(mt.semantics(k, ds));
    }
    return out;
}

double mse(std::span<double const> predictions, std::span<double const> targets)
{
    if (predictions.size() != targets.size()) {
        throw std::invalid_argument("mse: length mismatch");
    }
    if (targets.empty()) {
        throw std::invalid_argument("mse: empty input");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        sum += squared_error(predictions[j], targets[j]);
    }
    return mean_capped(sum, targets.size());
}

std::vector<double> per_tree_mse(SemanticsView sem, std::span<double const> targets)
{
    std::vector<double> out;
    out.reserve(sem.size());
    for (auto const& s : sem) {
        out.push_back(mse(s, targets));
    }
    return out;
}

double error_e(SemanticsView sem, std::span<double const> targets)
{
    check_shape(sem, targets);
    double e = 0.0;
    for (auto const& s : sem) {
        e += mse(s, targets);
    }
    return clamp_value(e);
}

double diversified_d1(SemanticsView sem, std::span<double const> targets)
{
    check_shape(sem, targets);
    double sum = 0.0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        double best = squared_error(sem[0][j], targets[j]);
        for (std::size_t k = 1; k < sem.size(); ++k) {
            best = std::min(best, squared_error(sem[k][j], targets[j]));
        }
        sum += best;
    }
    return mean_capped(sum, targets.size());
}

double diversified_d2(SemanticsView sem, std::span<double const> targets)
{
    check_shape(sem, targets);
    auto const n = sem.size();
    if (n < 2) {
        return mse(sem[0], targets);
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t l = i + 1; l < n; ++l) {
            double sum = 0.0;
            for (std::size_t j = 0; j < targets.size(); ++j) {
                sum += std::min(squared_error(sem[i][j], targets[j]), squared_error(sem[l][j], targets[j]));
            }
            total += mean_capped(sum, targets.size());
        }
    }
    return clamp_value(2.0 * total / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

double error_e(MultiTree const& mt, Dataset const& ds) { return error_e(view_of(mt, ds), ds.targets()); }
double diversified_d1(MultiTree const& mt, Dataset const& ds) { return diversified_d1(view_of(mt, ds), ds.targets()); }
double diversified_d2(MultiTree const& mt, Dataset const& ds) { return diversified_d2(view_of(mt, ds), ds.targets()); }

ObjectiveVector evaluate_objectives(SemanticsView sem, std::span<double const> targets, std::span<Objective const> set)
{
    std::vector<double> values;
    values.reserve(set.size());
    for (auto o : set) {
        switch (o) {
        case Objective::E:
            values.push_back(error_e(sem, targets));
            break;
        case Objective::D1:
            values.push_back(diversified_d1(sem, targets));
            break;
        case Objective::D2:
            values.push_back(diversified_d2(sem, targets));
            break;
        }
    }
    return ObjectiveVector(std::move(values));
}

ObjectiveVector evaluate_objectives(MultiTree const& mt, Dataset const& ds, std::span<Objective const> set)
{
    return evaluate_objectives(view_of(mt, ds), ds.targets(), set);
}

} // namespace mmgp
