#include "mmgp/report.hpp"

#include "mmgp/objectives.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace mmgp {

namespace {

FrontMember assemble(Semantics const& train_sem, Semantics const* test_sem, ObjectiveVector train_obj,
    std::vector<std::string> infixes, std::span<Objective const> objectives, Dataset const& train, Dataset const* test)
{
    FrontMember m;
    m.train = std::move(train_obj);
    auto const train_mse = per_tree_mse(view_of(train_sem), train.targets());
    std::vector<double> test_mse;
    if (test_sem != nullptr) {
        m.test = evaluate_objectives(view_of(*test_sem), test->targets(), objectives);
        test_mse = per_tree_mse(view_of(*test_sem), test->targets());
    }
    for (std::size_t k = 0; k < infixes.size(); ++k) {
        TreeReport t { std::move(infixes[k]), train_mse[k], std::nullopt };
        if (!test_mse.empty()) {
            t.mse_test = test_mse[k];
        }
        m.trees.push_back(std::move(t));
    }
    return m;
}

nlohmann::json objective_object(std::span<Objective const> names, ObjectiveVector const& v)
{
    auto out = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        out[std::string(objective_name(names[i]))] = v[i];
    }
    return out;
}

nlohmann::json history_json(RunHistory const& history)
{
    auto out = nlohmann::json::array();
    for (auto const& s : history) {
        nlohmann::json g {
            { "generation", s.generation },
            { "evaluations", s.evaluations },
            { "front_size", s.archive_size },
            { "hv_proxy", s.hv_proxy },
        };
        if (s.best_e) {
            g["best_E"] = *s.best_e;
        }
        if (s.best_d1) {
            g["best_D1"] = *s.best_d1;
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::string csv_quote(std::string const& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

} // namespace

FrontMember describe(MultiTree const& mt, ObjectiveVector const& train_objectives,
    std::span<Objective const> objectives, Dataset const& train, Dataset const* test)
{
    auto const train_sem = semantics(mt, train);
    std::optional<Semantics> test_sem;
    if (test != nullptr) {
        test_sem = semantics(mt, *test);
    }
    std::vector<std::string> infixes;
    for (std::size_t k = 0; k < mt.trees(); ++k) {
        infixes.push_back(to_infix(mt.genotype(k)));
    }
    return assemble(train_sem, test_sem ? &*test_sem : nullptr, train_objectives, std::move(infixes), objectives,
        train, test);
}

FrontMember describe(VarMultiTree const& mt, std::span<Objective const> objectives, Dataset const& train,
    Dataset const* test)
{
    auto const train_sem = semantics(mt, train);
    std::optional<Semantics> test_sem;
    if (test != nullptr) {
        test_sem = semantics(mt, *test);
    }
    std::vector<std::string> infixes;
    for (auto const& t : mt.trees) {
        infixes.push_back(to_infix(t));
    }
    return assemble(train_sem, test_sem ? &*test_sem : nullptr, mt.objectives, std::move(infixes), objectives, train,
        test);
}

std::vector<FrontMember> describe_front(
    MoResult const& res, std::span<Objective const> objectives, Dataset const& train, Dataset const* test)
{
    std::vector<FrontMember> out;
    for (auto const& e : res.archive.entries()) {
        out.push_back(describe(e.solution, e.objectives, objectives, train, test));
    }
    return out;
}

std::vector<FrontMember> describe_front(
    SoResult const& res, std::span<Objective const> objectives, Dataset const& train, Dataset const* test)
{
    return { describe(res.best, res.best_objectives, objectives, train, test) };
}

std::vector<FrontMember> describe_front(
    Nsga2Result const& res, std::span<Objective const> objectives, Dataset const& train, Dataset const* test)
{
    std::vector<FrontMember> out;
    for (auto const& m : res.front) {
        out.push_back(describe(m, objectives, train, test));
    }
    return out;
}

nlohmann::json to_json(RunRecord const& record)
{
    for (std::size_t i = 0; i < record.front.size(); ++i) {
        for (std::size_t j = 0; j < record.front.size(); ++j) {
            if (i != j && dominates(record.front[i].train, record.front[j].train)) {
                throw std::logic_error("run record front contains a dominated point");
            }
        }
    }
    auto names = nlohmann::json::array();
    for (auto o : record.objectives) {
        names.push_back(std::string(objective_name(o)));
    }
    auto points = nlohmann::json::array();
    for (auto const& m : record.front) {
        nlohmann::json p { { "objectives", objective_object(record.objectives, m.train) } };
        if (m.test) {
            p["test"] = objective_object(record.objectives, *m.test);
        }
        auto trees = nlohmann::json::array();
        for (auto const& t : m.trees) {
            nlohmann::json tj { { "infix", t.infix }, { "mse_train", t.mse_train } };
            if (t.mse_test) {
                tj["mse_test"] = *t.mse_test;
            }
            trees.push_back(std::move(tj));
        }
        p["trees"] = std::move(trees);
        points.push_back(std::move(p));
    }
    nlohmann::json doc {
        { "config", record.config },
        { "seed", record.seed },
        { "objectives", std::move(names) },
        { "evaluations", record.evaluations },
        { "generations", record.generations },
        { "history", history_json(record.history) },
        { "points", std::move(points) },
    };
    if (record.wall_clock_seconds) {
        doc["wall_clock_seconds"] = *record.wall_clock_seconds;
    }
    return doc;
}

void write_json(RunRecord const& record, std::ostream& out) { out << to_json(record).dump(2) << '\n'; }

void write_csv(RunRecord const& record, std::ostream& out)
{
    std::size_t const trees = record.front.empty() ? 0 : record.front.front().trees.size();
    out << "point";
    for (auto o : record.objectives) {
        out << ',' << objective_name(o);
    }
    for (auto o : record.objectives) {
        out << ",test_" << objective_name(o);
    }
    for (std::size_t k = 1; k <= trees; ++k) {
        out << ",tree" << k << "_infix,tree" << k << "_mse_train,tree" << k << "_mse_test";
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < record.front.size(); ++i) {
        auto const& m = record.front[i];
        out << i;
        for (double v : m.train) {
            out << ',' << v;
        }
        for (std::size_t d = 0; d < record.objectives.size(); ++d) {
            out << ',';
            if (m.test) {
                out << (*m.test)[d];
            }
        }
        for (auto const& t : m.trees) {
            out << ',' << csv_quote(t.infix) << ',' << t.mse_train << ',';
            if (t.mse_test) {
                out << *t.mse_test;
            }
        }
        out << '\n';
    }
}

FrontFile read_front(nlohmann::json const& doc, FrontSplit split)
{
    try {
        FrontFile f;
        for (auto const& n : doc.at("objectives")) {
            f.objectives.push_back(parse_objective(n.get<std::string>()));
        }
        char const* key = split == FrontSplit::Train ? "objectives" : "test";
        for (auto const& p : doc.at("points")) {
            auto const& obj = p.at(key);
            std::vector<double> v;
            for (auto o : f.objectives) {
                v.push_back(obj.at(std::string(objective_name(o))).get<double>());
            }
            f.points.emplace_back(std::move(v));
        }
        return f;
    } catch (nlohmann::json::exception const& e) {
        throw FrontFormatError(std::string("malformed front document: ") + e.what());
    } catch (std::invalid_argument const& e) {
        throw FrontFormatError(std::string("malformed front document: ") + e.what());
    }
}

FrontFile read_front_file(std::string const& path, FrontSplit split)
{
    std::ifstream in(path);
    if (!in) {
        throw FrontFormatError("cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (nlohmann::json::exception const& e) {
        throw FrontFormatError(path + ": " + e.what());
    }
    try {
        return read_front(doc, split);
    } catch (FrontFormatError const& e) {
        throw FrontFormatError(path + ": " + e.what());
    }
}

} // namespace mmgp
