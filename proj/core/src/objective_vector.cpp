#include "mmgp/objective_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmgp {

std::string_view objective_name(Objective o)
{
    switch (o) {
    case Objective::E:
        return "E";
    case Objective::D1:
        return "D1";
    case Objective::D2:
        return "D2";
    }
    return "?";
}

Objective parse_objective(std::string_view name)
{
    if (name == "E") {
        return Objective::E;
    }
    if (name == "D1" || name == "D") {
        return Objective::D1;
    }
    if (name == "D2") {
        return Objective::D2;
    }
    throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

bool dominates(ObjectiveVector const& a, ObjectiveVector const& b)
{
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        strictly = strictly || a[i] < b[i];
    }
    return strictly;
}

namespace tolerant {

bool equal(double a, double b)
{
    return a == b || std::abs(a - b) <= relative_tolerance * std::max(std::abs(a), std::abs(b));
}

bool equal(ObjectiveVector const& a, ObjectiveVector const& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!equal(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

} // namespace tolerant

} // namespace mmgp
