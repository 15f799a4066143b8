#include "mmgp/dataset.hpp"

#include "mmgp/random.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mmgp {

namespace {

std::uint64_t next_dataset_id()
{
    static std::atomic<std::uint64_t> counter { 1 };
    return counter.fetch_add(1, std::memory_order_relaxed);
}

std::string trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(std::string const& line)
{
    std::vector<std::string> cells;
    std::string_view rest(line);
    while (true) {
        auto const comma = rest.find(',');
        cells.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return cells;
}

bool parse_real(std::string const& cell, double& value)
{
    if (cell.empty()) {
        return false;
    }
    char const* begin = cell.data();
    char const* end = begin + cell.size();
    if (*begin == '+') {
        ++begin;
    }
    auto const [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

} // namespace

Dataset::Dataset(std::vector<std::vector<double>> columns, std::vector<double> targets,
    std::vector<std::string> feature_names, std::string target_name)
    : columns_(std::move(columns))
    , targets_(std::move(targets))
    , names_(std::move(feature_names))
    , target_name_(std::move(target_name))
    , id_(next_dataset_id())
{
    if (targets_.empty()) {
        throw DatasetError("dataset has no records");
    }
    for (auto const& col : columns_) {
        if (col.size() != targets_.size()) {
            throw DatasetError("feature column length differs from target length");
        }
        if (!std::all_of(col.begin(), col.end(), [](double v) { return std::isfinite(v); })) {
            throw DatasetError("feature values must be finite");
        }
    }
    if (!std::all_of(targets_.begin(), targets_.end(), [](double v) { return std::isfinite(v); })) {
        throw DatasetError("target values must be finite");
    }
    if (names_.empty()) {
        for (std::size_t j = 0; j < columns_.size(); ++j) {
            names_.push_back("x" + std::to_string(j + 1));
        }
    } else if (names_.size() != columns_.size()) {
        throw DatasetError("feature name count differs from column count");
    }
}

Dataset Dataset::from_rows(std::vector<std::vector<double>> const& rows, std::vector<double> targets,
    std::vector<std::string> feature_names, std::string target_name)
{
    if (rows.size() != targets.size()) {
        throw DatasetError("row count differs from target count");
    }
    std::size_t const width = rows.empty() ? 0 : rows.front().size();
    std::vector<std::vector<double>> columns(width, std::vector<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) {
            throw DatasetError("ragged rows");
        }
        for (std::size_t j = 0; j < width; ++j) {
            columns[j][i] = rows[i][j];
        }
    }
    return Dataset(std::move(columns), std::move(targets), std::move(feature_names), std::move(target_name));
}

double Dataset::target_min() const { return *std::min_element(targets_.begin(), targets_.end()); }
double Dataset::target_max() const { return *std::max_element(targets_.begin(), targets_.end()); }

Dataset Dataset::select_rows(std::span<std::size_t const> rows) const
{
    std::vector<std::vector<double>> columns(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        columns[j].reserve(rows.size());
        for (auto r : rows) {
            columns[j].push_back(columns_[j].at(r));
        }
    }
    std::vector<double> targets;
    targets.reserve(rows.size());
    for (auto r : rows) {
        targets.push_back(targets_.at(r));
    }
    return Dataset(std::move(columns), std::move(targets), names_, target_name_);
}

Dataset parse_csv(std::istream& in, TargetColumn const& target, CsvOptions options)
{
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (options.header && header.empty()) {
            header = std::move(cells);
            width = header.size();
            continue;
        }
        if (width == 0) {
            width = cells.size();
        }
        if (cells.size() != width) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected " << width << " cells, found " << cells.size();
            throw DatasetError(msg.str());
        }
        std::vector<double> row(width);
        for (std::size_t j = 0; j < width; ++j) {
            if (!parse_real(cells[j], row[j])) {
                std::ostringstream msg;
                msg << "line " << line_no << ", column " << (j + 1) << ": cannot parse '" << cells[j]
                    << "' as a finite real";
                throw DatasetError(msg.str());
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DatasetError("no data records in CSV input");
    }

    std::size_t target_index = 0;
    if (auto const* name = std::get_if<std::string>(&target)) {
        auto const it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) {
            throw DatasetError("target column '" + *name + "' not found");
        }
        target_index = static_cast<std::size_t>(it - header.begin());
    } else {
        target_index = std::get<std::size_t>(target);
        if (target_index >= width) {
            throw DatasetError("target column index " + std::to_string(target_index) + " out of range");
        }
    }

    std::vector<std::vector<double>> columns;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < width; ++j) {
        if (j == target_index) {
            continue;
        }
        std::vector<double> col(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            col[i] = rows[i][j];
        }
        columns.push_back(std::move(col));
        if (!header.empty()) {
            names.push_back(header[j]);
        }
    }
    std::vector<double> targets(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        targets[i] = rows[i][target_index];
    }
    std::string target_name = header.empty() ? "y" : header[target_index];
    return Dataset(std::move(columns), std::move(targets), std::move(names), std::move(target_name));
}

Dataset load_csv(std::filesystem::path const& path, TargetColumn const& target, CsvOptions options)
{
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("cannot open " + path.string());
    }
    return parse_csv(in, target, options);
}

void write_csv(Dataset const& ds, std::ostream& out)
{
    for (auto const& name : ds.feature_names()) {
        out << name << ',';
    }
    out << ds.target_name() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t j = 0; j < ds.features(); ++j) {
            out << ds.feature(i, j) << ',';
        }
        out << ds.targets()[i] << '\n';
    }
}

std::pair<Dataset, Dataset> split(Dataset const& ds, SplitSpec const& spec)
{
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
    auto const n = ds.rows();
    auto const n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    if (n_train < 1 || n_train >= n) {
        throw std::invalid_argument("train fraction leaves an empty side");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.seed);
    rng.shuffle(order.begin(), order.end());

    std::span<std::size_t const> all(order);
    return { ds.select_rows(all.first(n_train)), ds.select_rows(all.subspan(n_train)) };
}

Dataset gen_multimodal(std::uint64_t seed, double sigma)
{
    constexpr std::size_t quadratic_rows = 100;
    constexpr std::size_t linear_rows = 40;
    Rng rng(seed);
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < quadratic_rows + linear_rows; ++i) {
        double const xi = rng.uniform(0.0, 10.0);
        double const noise = rng.normal(0.0, sigma);
        x.push_back(xi);
        y.push_back((i < quadratic_rows ? xi * xi : 2.0 * xi) + noise);
    }
    return Dataset({ std::move(x) }, std::move(y), { "x1" }, "y");
}

Dataset gen_hidden_variable(std::uint64_t seed, double sigma)
{
    constexpr std::size_t n = 100;
    Rng rng(seed);
    std::vector<double> x1(n);
    std::vector<double> x2(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double const h = rng.uniform(0.0, 10.0);
        x1[i] = h + rng.normal(0.0, sigma);
        x2[i] = h + rng.normal(0.0, sigma);
        y[i] = h;
    }
    return Dataset({ std::move(x1), std::move(x2) }, std::move(y), { "x1", "x2" }, "y");
}

} // namespace mmgp
