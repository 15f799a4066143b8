#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmgp {

enum class Objective { E, D1, D2 };

std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view name);

// Minimization objective values of one solution, in the run's objective order.
class ObjectiveVector {
public:
    ObjectiveVector() = default;
    explicit ObjectiveVector(std::vector<double> values)
        : values_(std::move(values))
    {
    }
    ObjectiveVector(std::initializer_list<double> values)
        : values_(values)
    {
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<double const> values() const { return values_; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    friend bool operator==(ObjectiveVector const&, ObjectiveVector const&) = default;

private:
    std::vector<double> values_;
};

// Exact Pareto dominance: a <= b everywhere and a < b somewhere.
bool dominates(ObjectiveVector const& a, ObjectiveVector const& b);

// Objective-vector equality up to a relative 1e-10, used wherever two
// solutions are asked to have "the same objective values".
namespace tolerant {

inline constexpr double relative_tolerance = 1e-10;

bool equal(double a, double b);
bool equal(ObjectiveVector const& a, ObjectiveVector const& b);

} // namespace tolerant

} // namespace mmgp
