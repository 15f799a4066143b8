#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

namespace mmgp {

// Any subset of limits; the run stops as soon as one is reached. Checked
// between generations.
struct Termination {
    std::optional<std::size_t> max_generations;
    std::optional<double> max_seconds;
    std::optional<std::size_t> max_evaluations;

    bool any() const { return max_generations || max_seconds || max_evaluations; }
};

class Budget {
public:
    explicit Budget(Termination t)
        : limits_(t)
        , start_(std::chrono::steady_clock::now())
    {
    }

    bool exhausted(std::size_t generations, std::size_t evaluations) const
    {
        if (limits_.max_generations && generations >= *limits_.max_generations) {
            return true;
        }
        if (limits_.max_evaluations && evaluations >= *limits_.max_evaluations) {
            return true;
        }
        return limits_.max_seconds && elapsed() >= *limits_.max_seconds;
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    Termination limits_;
    std::chrono::steady_clock::time_point start_;
};

struct GenerationStats {
    std::size_t generation = 0;
    std::size_t evaluations = 0;
    std::size_t archive_size = 0;
    // hypervolume of the current front normalized by its own bounds
    double hv_proxy = 0.0;
    std::optional<double> best_e;
    std::optional<double> best_d1;
};

using RunHistory = std::vector<GenerationStats>;

} // namespace mmgp
