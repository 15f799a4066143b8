#pragma once

#include "mmgp/archive.hpp"
#include "mmgp/budget.hpp"
#include "mmgp/clustering.hpp"
#include "mmgp/dataset.hpp"
#include "mmgp/linkage.hpp"
#include "mmgp/multitree.hpp"
#include "mmgp/objective_vector.hpp"
#include "mmgp/random.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace mmgp {

enum class Mode { SingleObjective, MultiObjective };

struct EngineConfig {
    Mode mode = Mode::MultiObjective;
    std::size_t population_size = 15000;
    std::size_t clusters = 7;
    std::size_t trees = 2;
    unsigned height = 3;
    std::vector<Objective> objectives { Objective::E, Objective::D1 };
    // index into `objectives` optimized in single-objective mode
    std::size_t so_objective = 0;
    Termination termination;
    std::uint64_t seed = 0;
    bool use_erc = true;
    std::size_t archive_capacity = 1000;
    std::size_t threads = 1;

    std::ostream* progress = nullptr;
    std::ostream* fos_dump = nullptr;

    // Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

// Forced improvements trigger after more than this many generations
// without improvement.
inline double nis_threshold(std::size_t population_size)
{
    return 1.0 + std::log10(static_cast<double>(population_size));
}

struct IndividualState {
    MultiTree solution;
    ObjectiveVector objectives;
    std::size_t cluster = 0;
    std::size_t nis = 0;
};

// Which rule admitted a multi-objective GOM change, checked in this order.
enum class MoClause {
    None,
    DominatesParent,
    EqualsParent,
    NewArchiveRegion, // not dominated by, and not equal to, any archive member
    SemanticVariant, // same objectives as an archive member, different semantics
};

MoClause mo_clause(ObjectiveVector const& parent, MultiTree const& offspring, ObjectiveVector const& child,
    ElitistArchive const& archive, Dataset const& ds);

bool accept_mo(ObjectiveVector const& parent, MultiTree const& offspring, ObjectiveVector const& child,
    ElitistArchive const& archive, Dataset const& ds);

struct AcceptancePolicy {
    // set: single-objective GOM on this objective index; unset: multi-objective GOM
    std::optional<std::size_t> single_objective;
    // forced improvements reject a child whose objectives equal the parent's
    bool forced = false;
};

struct Verdict {
    bool accepted = false;
    bool improved = false;
    MoClause clause = MoClause::None;
};

// `archive` may be null for single-objective policies.
Verdict judge(AcceptancePolicy const& policy, ObjectiveVector const& parent, MultiTree const& offspring,
    ObjectiveVector const& child, ElitistArchive const* archive, Dataset const& ds);

struct AcceptanceEvent {
    AcceptancePolicy policy;
    ObjectiveVector parent;
    ObjectiveVector child;
    MultiTree const* offspring = nullptr;
    Verdict verdict;
    ElitistArchive const* archive = nullptr;
    Dataset const* dataset = nullptr;
};

// Hooks for instrumentation. Callbacks run while the archive is locked.
class EngineObserver {
public:
    virtual ~EngineObserver() = default;
    virtual void on_acceptance(AcceptanceEvent const&) { }
    virtual void on_archive_update(ElitistArchive const&, AddResult) { }
    virtual void on_generation(GenerationStats const&, std::span<IndividualState const>) { }
};

// Shared state for variation within one generation.
struct GomContext {
    Dataset const& train;
    std::span<Objective const> objectives;
    ElitistArchive* archive = nullptr;
    std::mutex* archive_mutex = nullptr;
    std::atomic<std::size_t>* evaluations = nullptr;
    EngineObserver* observer = nullptr;
};

struct GomResult {
    bool changed = false;
    bool improved = false;
};

ObjectiveVector evaluate_individual(MultiTree& mt, GomContext& ctx);

// Gene-pool optimal mixing of `ind` in place: every FOS subset in random
// order, a fresh uniform donor per subset; changes the policy rejects are
// undone exactly.
GomResult gom_step(IndividualState& ind, Fos const& fos, std::span<MultiTree const* const> donors,
    AcceptancePolicy const& policy, GomContext& ctx, Rng& rng);

// Supplies a copy of the forced-improvement donor for the given draw.
using DonorSource = std::function<MultiTree(Rng&)>;

// One pass over the shuffled FOS with a single donor from `source`, stopping
// at the first accepted change. If nothing was accepted the individual is
// replaced by a fresh draw from `source`.
GomResult forced_improvements(IndividualState& ind, Fos const& fos, DonorSource const& source,
    AcceptancePolicy policy, GomContext& ctx, Rng& rng);

struct MoResult {
    ElitistArchive archive;
    RunHistory history;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

struct SoResult {
    MultiTree best;
    ObjectiveVector best_objectives;
    RunHistory history;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

MoResult run_mo(EngineConfig const& cfg, Dataset const& train, EngineObserver* observer = nullptr);
SoResult run_so(EngineConfig const& cfg, Dataset const& train, EngineObserver* observer = nullptr);

} // namespace mmgp
