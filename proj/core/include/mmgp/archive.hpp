#pragma once

#include "mmgp/dataset.hpp"
#include "mmgp/multitree.hpp"
#include "mmgp/objective_vector.hpp"
#include "mmgp/random.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mmgp {

enum class AddResult { Added, Replaced, Rejected };

struct ArchiveEntry {
    MultiTree solution;
    ObjectiveVector objectives;
};

// Mutually non-dominated set of evaluated multi-trees.
//
// No two entries have (tolerantly) equal objective vectors: a semantically
// different candidate with the same objectives replaces the stored entry
// with probability 1/2, unless that would raise an objective-wise minimum.
// Above capacity, one entry from the most crowded cell
// of an adaptive objective-space grid is discarded; entries that are best on
// some objective are never discarded.
//
// Not internally synchronized; callers serialize access.
class ElitistArchive {
public:
    explicit ElitistArchive(std::size_t capacity = 1000);

    AddResult update(MultiTree const& candidate, ObjectiveVector const& objectives, Dataset const& ds, Rng& rng);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::span<ArchiveEntry const> entries() const { return entries_; }

    bool dominated_by_any(ObjectiveVector const& obj) const;
    // entry with tolerantly equal objectives, if any
    ArchiveEntry const* find_equal(ObjectiveVector const& obj) const;

    // argmin of one objective, ties broken uniformly
    ArchiveEntry const& best_on(std::size_t objective, Rng& rng) const;
    ArchiveEntry const& random_entry(Rng& rng) const;

    std::vector<ObjectiveVector> front() const;
    // per-objective minimum over the entries
    std::vector<double> best_values() const;

private:
    void prune(Rng& rng);
    bool raises_minimum(ObjectiveVector const& held, ObjectiveVector const& incoming) const;

    std::size_t capacity_;
    std::vector<ArchiveEntry> entries_;
};

// Donor for forced improvements: a uniform archive member, or the member that
// is best on one objective. Throws std::logic_error on an empty archive.
struct DonorMode {
    std::optional<std::size_t> best_on;

    static DonorMode random() { return {}; }
    static DonorMode best_on_objective(std::size_t m) { return { m }; }
};

MultiTree const& fi_donor(ElitistArchive const& archive, DonorMode mode, Rng& rng);

} // namespace mmgp
