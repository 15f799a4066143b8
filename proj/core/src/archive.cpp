#include "mmgp/archive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mmgp {

ElitistArchive::ElitistArchive(std::size_t capacity)
    : capacity_(capacity)
{
    if (capacity_ == 0) {
        throw std::invalid_argument("archive capacity must be positive");
    }
}

bool ElitistArchive::dominated_by_any(ObjectiveVector const& obj) const
{
    return std::any_of(entries_.begin(), entries_.end(),
        [&](ArchiveEntry const& e) { return dominates(e.objectives, obj); });
}

ArchiveEntry const* ElitistArchive::find_equal(ObjectiveVector const& obj) const
{
    for (auto const& e : entries_) {
        if (tolerant::equal(e.objectives, obj)) {
            return &e;
        }
    }
    return nullptr;
}

// Swapping `held` for `incoming` must not raise any per-objective minimum
// of the archive that `held` currently attains.
bool ElitistArchive::raises_minimum(ObjectiveVector const& held, ObjectiveVector const& incoming) const
{
    auto const best = best_values();
    for (std::size_t d = 0; d < held.size(); ++d) {
        if (held[d] == best[d] && incoming[d] > held[d]) {
            return true;
        }
    }
    return false;
}

AddResult ElitistArchive::update(MultiTree const& candidate, ObjectiveVector const& objectives, Dataset const& ds, Rng& rng)
{
    ArchiveEntry* same = nullptr;
    for (auto& e : entries_) {
        if (dominates(e.objectives, objectives)) {
            return AddResult::Rejected;
        }
        if (same == nullptr && tolerant::equal(e.objectives, objectives)) {
            same = &e;
        }
    }
    if (same != nullptr) {
        if (semantically_equal(same->solution, candidate, ds)) {
            return AddResult::Rejected;
        }
        // tolerance is not transitive: never swap in a point that dominates a third entry
        bool const isolated = std::none_of(entries_.begin(), entries_.end(),
            [&](ArchiveEntry const& e) { return &e != same && dominates(objectives, e.objectives); });
        if (isolated && rng.bernoulli(0.5) && !raises_minimum(same->objectives, objectives)) {
            same->solution = candidate;
            same->objectives = objectives;
            return AddResult::Replaced;
        }
        return AddResult::Rejected;
    }
    std::erase_if(entries_, [&](ArchiveEntry const& e) { return dominates(objectives, e.objectives); });
    entries_.push_back({ candidate, objectives });
    if (entries_.size() > capacity_) {
        prune(rng);
    }
    return AddResult::Added;
}

void ElitistArchive::prune(Rng& rng)
{
    auto const dims = entries_.front().objectives.size();
    std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
    for (auto const& e : entries_) {
        for (std::size_t d = 0; d < dims; ++d) {
            lo[d] = std::min(lo[d], e.objectives[d]);
            hi[d] = std::max(hi[d], e.objectives[d]);
        }
    }

    // protect every entry that attains an objective-wise minimum
    std::vector<bool> is_protected(entries_.size(), false);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t d = 0; d < dims; ++d) {
            if (entries_[i].objectives[d] == lo[d]) {
                is_protected[i] = true;
            }
        }
    }

    auto const cells_per_dim = static_cast<double>(capacity_);
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (is_protected[i]) {
            continue;
        }
        std::vector<std::int64_t> cell(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            double const width = (hi[d] - lo[d]) / cells_per_dim;
            cell[d] = width > 0.0 ? static_cast<std::int64_t>(std::floor((entries_[i].objectives[d] - lo[d]) / width)) : 0;
        }
        grid[cell].push_back(i);
    }
    if (grid.empty()) {
        return;
    }

    std::size_t most = 0;
    for (auto const& [cell, idx] : grid) {
        most = std::max(most, idx.size());
    }
    std::vector<std::vector<std::size_t> const*> crowded;
    for (auto const& [cell, idx] : grid) {
        if (idx.size() == most) {
            crowded.push_back(&idx);
        }
    }
    auto const& victims = *crowded[rng.below(crowded.size())];
    auto const victim = victims[rng.below(victims.size())];
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
}

ArchiveEntry const& ElitistArchive::best_on(std::size_t objective, Rng& rng) const
{
    if (entries_.empty()) {
        throw std::logic_error("archive is empty");
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        double const v = entries_[i].objectives[objective];
        if (v < best) {
            best = v;
            ties.clear();
        }
        if (v == best) {
            ties.push_back(i);
        }
    }
    if (ties.empty()) {
        ties.push_back(0);
    }
    return entries_[ties.size() == 1 ? ties.front() : ties[rng.below(ties.size())]];
}

ArchiveEntry const& ElitistArchive::random_entry(Rng& rng) const
{
    if (entries_.empty()) {
        throw std::logic_error("archive is empty");
    }
    return entries_[rng.below(entries_.size())];
}

std::vector<ObjectiveVector> ElitistArchive::front() const
{
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (auto const& e : entries_) {
        out.push_back(e.objectives);
    }
    return out;
}

std::vector<double> ElitistArchive::best_values() const
{
    std::vector<double> out;
    for (auto const& e : entries_) {
        if (out.empty()) {
            out.assign(e.objectives.begin(), e.objectives.end());
            continue;
        }
        for (std::size_t d = 0; d < out.size(); ++d) {
            out[d] = std::min(out[d], e.objectives[d]);
        }
    }
    return out;
}

MultiTree const& fi_donor(ElitistArchive const& archive, DonorMode mode, Rng& rng)
{
    if (archive.empty()) {
        throw std::logic_error("fi_donor: archive is empty");
    }
    if (mode.best_on) {
        return archive.best_on(*mode.best_on, rng).solution;
    }
    return archive.random_entry(rng).solution;
}

} // namespace mmgp
