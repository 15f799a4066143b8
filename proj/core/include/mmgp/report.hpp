#pragma once

#include "mmgp/budget.hpp"
#include "mmgp/dataset.hpp"
#include "mmgp/engine.hpp"
#include "mmgp/nsga2.hpp"
#include "mmgp/objective_vector.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmgp {

struct TreeReport {
    std::string infix;
    double mse_train = 0.0;
    std::optional<double> mse_test;
};

struct FrontMember {
    ObjectiveVector train;
    std::optional<ObjectiveVector> test;
    std::vector<TreeReport> trees;
};

struct RunRecord {
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<Objective> objectives;
    RunHistory history;
    std::vector<FrontMember> front;
    std::optional<double> wall_clock_seconds;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

// `test` may be null; train objectives are recomputed by the caller's search
// and passed in unchanged.
FrontMember describe(MultiTree const& mt, ObjectiveVector const& train_objectives,
    std::span<Objective const> objectives, Dataset const& train, Dataset const* test);
FrontMember describe(VarMultiTree const& mt, std::span<Objective const> objectives, Dataset const& train,
    Dataset const* test);

std::vector<FrontMember> describe_front(
    MoResult const& res, std::span<Objective const> objectives, Dataset const& train, Dataset const* test);
std::vector<FrontMember> describe_front(
    SoResult const& res, std::span<Objective const> objectives, Dataset const& train, Dataset const* test);
std::vector<FrontMember> describe_front(
    Nsga2Result const& res, std::span<Objective const> objectives, Dataset const& train, Dataset const* test);

// Throws std::logic_error if the front is not mutually non-dominated on train.
nlohmann::json to_json(RunRecord const& record);
void write_json(RunRecord const& record, std::ostream& out);
void write_csv(RunRecord const& record, std::ostream& out);

class FrontFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FrontSplit { Train, Test };

struct FrontFile {
    std::vector<Objective> objectives;
    std::vector<ObjectiveVector> points;
};

FrontFile read_front(nlohmann::json const& doc, FrontSplit split = FrontSplit::Train);
FrontFile read_front_file(std::string const& path, FrontSplit split = FrontSplit::Train);

} // namespace mmgp
