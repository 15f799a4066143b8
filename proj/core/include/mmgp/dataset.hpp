#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mmgp {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable regression table. Features are stored column-major so that tree
// evaluation can stream over one variable at a time.
class Dataset {
public:
    Dataset(std::vector<std::vector<double>> columns, std::vector<double> targets,
        std::vector<std::string> feature_names = {}, std::string target_name = "y");

    static Dataset from_rows(std::vector<std::vector<double>> const& rows, std::vector<double> targets,
        std::vector<std::string> feature_names = {}, std::string target_name = "y");

    std::size_t rows() const { return targets_.size(); }
    std::size_t features() const { return columns_.size(); }

    std::span<double const> column(std::size_t j) const { return columns_.at(j); }
    std::span<double const> targets() const { return targets_; }
    double feature(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }

    std::vector<std::string> const& feature_names() const { return names_; }
    std::string const& target_name() const { return target_name_; }

    double target_min() const;
    double target_max() const;

    Dataset select_rows(std::span<std::size_t const> rows) const;

    // Copies share the id; it identifies the data for semantic caches.
    std::uint64_t id() const { return id_; }

private:
    std::vector<std::vector<double>> columns_;
    std::vector<double> targets_;
    std::vector<std::string> names_;
    std::string target_name_;
    std::uint64_t id_;
};

using TargetColumn = std::variant<std::string, std::size_t>;

struct CsvOptions {
    bool header = true;
};

Dataset load_csv(std::filesystem::path const& path, TargetColumn const& target, CsvOptions options = {});
Dataset parse_csv(std::istream& in, TargetColumn const& target, CsvOptions options = {});

// Writes features then the target as the last column, with a header row.
void write_csv(Dataset const& ds, std::ostream& out);

struct SplitSpec {
    double train_fraction = 0.75;
    std::uint64_t seed = 0;
};

// Uniform shuffle of the row order followed by a cut at
// round(train_fraction * rows).
std::pair<Dataset, Dataset> split(Dataset const& ds, SplitSpec const& spec);

// 100 rows of y = x^2 + N(0, sigma) followed by 40 rows of y = 2x + N(0, sigma),
// x ~ U[0, 10), rows kept in generation order.
Dataset gen_multimodal(std::uint64_t seed, double sigma = 10.0);

// 100 rows: H ~ U[0, 10), x1 = H + N(0, sigma), x2 = H + N(0, sigma), y = H.
Dataset gen_hidden_variable(std::uint64_t seed, double sigma = 0.5);

} // namespace mmgp
