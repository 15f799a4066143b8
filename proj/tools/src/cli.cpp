#include "mmgp_cli/cli.hpp"

#include "mmgp/dataset.hpp"
#include "mmgp/engine.hpp"
#include "mmgp/metrics.hpp"
#include "mmgp/nsga2.hpp"
#include "mmgp/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace mmgp::cli {

namespace {

struct RunOptions {
    std::string algo;
    std::string data;
    std::string gen;
    std::string target = "y";
    bool no_header = false;
    std::optional<std::uint64_t> gen_seed;
    std::optional<double> sigma;
    double train_fraction = 0.75;
    std::optional<std::uint64_t> split_seed;
    std::optional<std::size_t> pop;
    std::size_t clusters = 7;
    std::size_t trees = 2;
    unsigned height = 3;
    std::size_t max_size = 7;
    std::string objective = "E";
    std::vector<std::string> objectives { "E", "D1" };
    std::optional<std::size_t> gens;
    std::optional<double> seconds;
    std::optional<std::size_t> evals;
    std::uint64_t seed = 0;
    bool no_erc = false;
    std::size_t threads = 1;
    std::size_t archive_capacity = 1000;
    std::string out;
    std::string csv;
    std::string fos_dump;
    bool no_timing = false;
    bool verbose = false;
};

struct HvOptions {
    std::vector<std::string> files;
    std::string split = "train";
};

struct GenOptions {
    std::string name;
    std::uint64_t seed = 0;
    std::optional<double> sigma;
    std::string out;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Dataset generate(std::string const& name, std::uint64_t seed, std::optional<double> sigma)
{
    if (name == "multimodal") {
        return sigma ? gen_multimodal(seed, *sigma) : gen_multimodal(seed);
    }
    if (name == "hidden") {
        return sigma ? gen_hidden_variable(seed, *sigma) : gen_hidden_variable(seed);
    }
    throw UsageError("unknown generator '" + name + "' (expected multimodal or hidden)");
}

TargetColumn parse_target(std::string const& t)
{
    if (!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return static_cast<std::size_t>(std::stoull(t));
    }
    return t;
}

std::vector<Objective> parse_objectives(std::vector<std::string> const& names)
{
    std::vector<Objective> out;
    for (auto const& n : names) {
        try {
            out.push_back(parse_objective(n));
        } catch (std::invalid_argument const& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

Termination termination_of(RunOptions const& o)
{
    Termination t;
    t.max_generations = o.gens;
    t.max_seconds = o.seconds;
    t.max_evaluations = o.evals;
    if (!t.any()) {
        throw UsageError("a budget is required: --gens, --time or --evals");
    }
    return t;
}

template <typename Fn>
void with_output(std::string const& path, std::ostream& fallback, Fn&& write)
{
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot write " + path);
    }
    write(file);
}

nlohmann::json config_echo(RunOptions const& o, std::vector<Objective> const& objectives, std::size_t pop)
{
    auto names = nlohmann::json::array();
    for (auto obj : objectives) {
        names.push_back(std::string(objective_name(obj)));
    }
    nlohmann::json c {
        { "algo", o.algo },
        { "train_fraction", o.train_fraction },
        { "population_size", pop },
        { "trees", o.trees },
        { "objectives", std::move(names) },
        { "use_erc", !o.no_erc },
        { "threads", o.threads },
    };
    if (o.data.empty()) {
        c["generator"] = o.gen;
    } else {
        c["data"] = o.data;
        c["target"] = o.target;
    }
    if (o.algo == "nsga2") {
        c["max_size"] = o.max_size;
    } else {
        c["height"] = o.height;
    }
    if (o.algo == "mo") {
        c["clusters"] = o.clusters;
        c["archive_capacity"] = o.archive_capacity;
    }
    if (o.algo == "so") {
        c["objective"] = o.objective;
    }
    auto budget = nlohmann::json::object();
    if (o.gens) {
        budget["generations"] = *o.gens;
    }
    if (o.seconds) {
        budget["seconds"] = *o.seconds;
    }
    if (o.evals) {
        budget["evaluations"] = *o.evals;
    }
    c["budget"] = std::move(budget);
    return c;
}

int cmd_run(RunOptions const& o, std::ostream& out, std::ostream& err)
{
    if (o.data.empty() == o.gen.empty()) {
        throw UsageError("exactly one of --data or --gen is required");
    }
    if (!(o.train_fraction > 0.0 && o.train_fraction < 1.0)) {
        throw UsageError("--train-fraction must lie in (0, 1)");
    }
    auto objectives = parse_objectives(o.objectives);
    auto const termination = termination_of(o);

    Dataset const full = o.data.empty() ? generate(o.gen, o.gen_seed.value_or(o.seed), o.sigma)
                                        : load_csv(o.data, parse_target(o.target), CsvOptions { !o.no_header });
    auto const [train, test] = split(full, SplitSpec { o.train_fraction, o.split_seed.value_or(o.seed) });

    std::ofstream fos_file;
    if (!o.fos_dump.empty()) {
        fos_file.open(o.fos_dump);
        if (!fos_file) {
            throw std::runtime_error("cannot write " + o.fos_dump);
        }
    }

    RunRecord record;
    record.seed = o.seed;
    auto const started = std::chrono::steady_clock::now();

    if (o.algo == "nsga2") {
        Nsga2Config cfg;
        cfg.population_size = o.pop.value_or(15000);
        cfg.trees = o.trees;
        cfg.max_size = o.max_size;
        cfg.objectives = objectives;
        cfg.termination = termination;
        cfg.seed = o.seed;
        cfg.use_erc = !o.no_erc;
        cfg.threads = o.threads;
        cfg.progress = o.verbose ? &err : nullptr;
        cfg.validate();
        auto const res = run_nsga2(cfg, train);
        record.front = describe_front(res, objectives, train, &test);
        record.history = res.history;
        record.evaluations = res.evaluations;
        record.generations = res.generations;
        record.config = config_echo(o, objectives, cfg.population_size);
    } else {
        EngineConfig cfg;
        cfg.trees = o.trees;
        cfg.height = o.height;
        cfg.termination = termination;
        cfg.seed = o.seed;
        cfg.use_erc = !o.no_erc;
        cfg.threads = o.threads;
        cfg.archive_capacity = o.archive_capacity;
        cfg.progress = o.verbose ? &err : nullptr;
        cfg.fos_dump = fos_file.is_open() ? &fos_file : nullptr;
        if (o.algo == "so") {
            auto const target = parse_objectives({ o.objective }).front();
            auto it = std::find(objectives.begin(), objectives.end(), target);
            if (it == objectives.end()) {
                objectives.push_back(target);
                it = objectives.end() - 1;
            }
            cfg.mode = Mode::SingleObjective;
            cfg.so_objective = static_cast<std::size_t>(it - objectives.begin());
            cfg.population_size = o.pop.value_or(5000);
        } else {
            cfg.mode = Mode::MultiObjective;
            cfg.population_size = o.pop.value_or(15000);
            cfg.clusters = o.clusters;
        }
        cfg.objectives = objectives;
        cfg.validate();
        if (cfg.mode == Mode::SingleObjective) {
            auto const res = run_so(cfg, train);
            record.front = describe_front(res, objectives, train, &test);
            record.history = res.history;
            record.evaluations = res.evaluations;
            record.generations = res.generations;
        } else {
            auto const res = run_mo(cfg, train);
            record.front = describe_front(res, objectives, train, &test);
            record.history = res.history;
            record.evaluations = res.evaluations;
            record.generations = res.generations;
        }
        record.config = config_echo(o, objectives, cfg.population_size);
    }
    record.objectives = objectives;
    if (!o.no_timing) {
        record.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }

    with_output(o.out, out, [&](std::ostream& s) { write_json(record, s); });
    if (!o.csv.empty()) {
        with_output(o.csv, out, [&](std::ostream& s) { write_csv(record, s); });
    }
    return exit_ok;
}

std::vector<ObjectiveVector> projected(std::vector<ObjectiveVector> const& pts, std::size_t i, std::size_t j)
{
    std::vector<ObjectiveVector> out;
    out.reserve(pts.size());
    for (auto const& p : pts) {
        out.push_back({ p[i], p[j] });
    }
    return out;
}

int cmd_hv(HvOptions const& o, std::ostream& out)
{
    if (o.split != "train" && o.split != "test") {
        throw UsageError("--split must be train or test");
    }
    auto const split = o.split == "train" ? FrontSplit::Train : FrontSplit::Test;
    std::vector<FrontFile> files;
    for (auto const& path : o.files) {
        files.push_back(read_front_file(path, split));
    }
    auto const& names = files.front().objectives;
    for (auto const& f : files) {
        if (f.objectives != names) {
            throw FrontFormatError("front files disagree on the objective list");
        }
    }
    if (names.size() < 2) {
        throw FrontFormatError("hypervolume needs at least two objectives");
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            pairs.emplace_back(i, j);
        }
    }
    std::vector<std::vector<double>> table(files.size());
    for (auto [i, j] : pairs) {
        std::vector<std::vector<ObjectiveVector>> fronts;
        for (auto const& f : files) {
            fronts.push_back(projected(f.points, i, j));
        }
        auto const norm = normalize_fronts(fronts);
        for (std::size_t f = 0; f < files.size(); ++f) {
            table[f].push_back(hypervolume_2d(norm.fronts[f]));
        }
    }

    out << "front";
    for (auto [i, j] : pairs) {
        out << "\thv_" << objective_name(names[i]) << '_' << objective_name(names[j]);
    }
    out << '\n' << std::fixed << std::setprecision(6);
    for (std::size_t f = 0; f < files.size(); ++f) {
        out << o.files[f];
        for (double v : table[f]) {
            out << '\t' << v;
        }
        out << '\n';
    }
    return exit_ok;
}

int cmd_gen(GenOptions const& o, std::ostream& out)
{
    auto const ds = generate(o.name, o.seed, o.sigma);
    with_output(o.out, out, [&](std::ostream& s) { write_csv(ds, s); });
    return exit_ok;
}

} // namespace

int run(std::span<std::string const> args, std::ostream& out, std::ostream& err)
{
    CLI::App app { "Multi-tree multi-objective GP-GOMEA symbolic regression", "mmgp" };
    app.require_subcommand(1);

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Run SO, MO or NSGA-II search and write a run record");
    run_cmd->add_option("--algo", ro.algo, "so, mo or nsga2")->required()->check(CLI::IsMember({ "so", "mo", "nsga2" }));
    run_cmd->add_option("--data", ro.data, "CSV dataset");
    run_cmd->add_option("--target", ro.target, "target column name or 0-based index");
    run_cmd->add_flag("--no-header", ro.no_header, "CSV has no header row");
    run_cmd->add_option("--gen", ro.gen, "synthetic dataset: multimodal or hidden");
    run_cmd->add_option("--gen-seed", ro.gen_seed, "generator seed (default: --seed)");
    run_cmd->add_option("--sigma", ro.sigma, "generator noise level");
    run_cmd->add_option("--train-fraction", ro.train_fraction, "train share of the rows");
    run_cmd->add_option("--split-seed", ro.split_seed, "train/test split seed (default: --seed)");
    run_cmd->add_option("--pop", ro.pop, "population size (default 5000 for so, 15000 otherwise)");
    run_cmd->add_option("--clusters", ro.clusters, "clusters in mo mode");
    run_cmd->add_option("--n-trees", ro.trees, "trees per multi-tree");
    run_cmd->add_option("--height", ro.height, "template tree height (so, mo)");
    run_cmd->add_option("--max-size", ro.max_size, "maximum tree size (nsga2)");
    run_cmd->add_option("--objective", ro.objective, "objective optimized by so");
    run_cmd->add_option("--objectives", ro.objectives, "objective list, e.g. E,D1")->delimiter(',');
    run_cmd->add_option("--gens", ro.gens, "generation budget");
    run_cmd->add_option("--time", ro.seconds, "wall-clock budget in seconds");
    run_cmd->add_option("--evals", ro.evals, "evaluation budget");
    run_cmd->add_option("--seed", ro.seed, "random seed")->required();
    run_cmd->add_flag("--no-erc", ro.no_erc, "disable ephemeral random constants");
    run_cmd->add_option("--threads", ro.threads, "worker threads");
    run_cmd->add_option("--archive-capacity", ro.archive_capacity, "elitist archive capacity");
    run_cmd->add_option("--out", ro.out, "run record JSON (default: stdout)");
    run_cmd->add_option("--csv", ro.csv, "CSV mirror of the final front");
    run_cmd->add_option("--fos-dump", ro.fos_dump, "write every learned FOS here (1-based gene indices)");
    run_cmd->add_flag("--no-timing", ro.no_timing, "omit wall-clock time from the record");
    run_cmd->add_flag("-v,--verbose", ro.verbose, "per-generation progress on stderr");

    HvOptions ho;
    auto* hv_cmd = app.add_subcommand("hv", "Hypervolume of run-record fronts against their front of fronts");
    hv_cmd->add_option("files", ho.files, "run record JSON files")->required();
    hv_cmd->add_option("--split", ho.split, "train or test objectives");

    GenOptions go;
    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic dataset as CSV");
    gen_cmd->add_option("name", go.name, "multimodal or hidden")->required();
    gen_cmd->add_option("--seed", go.seed, "random seed")->required();
    gen_cmd->add_option("--sigma", go.sigma, "noise level");
    gen_cmd->add_option("--out", go.out, "output CSV (default: stdout)");

    try {
        // CLI11 consumes a reversed vector
        std::vector<std::string> rest(args.rbegin(), args.rend());
        app.parse(rest);
    } catch (CLI::ParseError const& e) {
        auto const code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*run_cmd) {
            return cmd_run(ro, out, err);
        }
        if (*hv_cmd) {
            return cmd_hv(ho, out);
        }
        return cmd_gen(go, out);
    } catch (UsageError const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::invalid_argument const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (DatasetError const& e) {
        err << "dataset error: " << e.what() << '\n';
        return exit_data;
    } catch (FrontFormatError const& e) {
        err << "front error: " << e.what() << '\n';
        return exit_data;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace mmgp::cli
