#include "criteria.hpp"

#include "mmgp/engine.hpp"
#include "mmgp/metrics.hpp"
#include "mmgp/nsga2.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>

namespace acceptance {

using namespace mmgp;

namespace {

constexpr std::uint64_t seeds = 5;
constexpr double default_seconds = 60.0;
constexpr std::size_t population = 500;

// MMGP_YACHT_SECONDS shortens the budget for smoke runs
double seconds_per_run()
{
    if (char const* env = std::getenv("MMGP_YACHT_SECONDS")) {
        return std::stod(env);
    }
    return default_seconds;
}

std::string yacht_path()
{
    if (char const* env = std::getenv("MMGP_YACHT_CSV")) {
        return env;
    }
    return "data/yacht.csv";
}

// headerless, six features then the residuary resistance
std::optional<Dataset> load_train(std::uint64_t seed, std::string& why)
{
    auto const path = yacht_path();
    if (!std::filesystem::exists(path)) {
        why = "yacht table not found at " + path + " (set MMGP_YACHT_CSV)";
        return std::nullopt;
    }
    auto const full = load_csv(path, std::size_t { 6 }, CsvOptions { false });
    return split(full, SplitSpec { 0.75, seed }).first;
}

EngineConfig base(std::uint64_t seed)
{
    EngineConfig cfg;
    cfg.population_size = population;
    cfg.height = 3;
    cfg.termination.max_seconds = seconds_per_run();
    cfg.seed = seed;
    return cfg;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    auto const n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string format(char const* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

} // namespace

Outcome yacht_mo_vs_so()
{
    std::vector<double> mo_e, mo_d1, so_e, so_d1;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        std::string why;
        auto const train = load_train(seed, why);
        if (!train) {
            return { false, why };
        }
        auto const mo = run_mo(base(seed), *train);
        auto const best = mo.archive.best_values();
        mo_e.push_back(best[0]);
        mo_d1.push_back(best[1]);

        auto cfg = base(seed);
        cfg.mode = Mode::SingleObjective;
        cfg.so_objective = 0;
        so_e.push_back(run_so(cfg, *train).best_objectives[0]);
        cfg.so_objective = 1;
        so_d1.push_back(run_so(cfg, *train).best_objectives[1]);
    }
    double const me = median(mo_e), se = median(so_e), md = median(mo_d1), sd = median(so_d1);
    bool const ok = me <= 1.3 * se && md <= 1.3 * sd;
    return { ok, format("median E: MO %.4g vs SO %.4g; median D1: MO %.4g vs SO %.4g", me, se, md, sd) };
}

Outcome yacht_mo_vs_nsga2()
{
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        std::string why;
        auto const train = load_train(seed, why);
        if (!train) {
            return { false, why };
        }
        auto const mo = run_mo(base(seed), *train);

        Nsga2Config ncfg;
        ncfg.population_size = population;
        ncfg.max_size = 7;
        ncfg.termination.max_seconds = seconds_per_run();
        ncfg.seed = seed;
        auto const ns = run_nsga2(ncfg, *train);

        std::vector<std::vector<ObjectiveVector>> fronts(2);
        fronts[0] = mo.archive.front();
        for (auto const& m : ns.front) {
            fronts[1].push_back(m.objectives);
        }
        auto const n = normalize_fronts(fronts);
        double const hv_mo = hypervolume_2d(n.fronts[0]);
        double const hv_ns = hypervolume_2d(n.fronts[1]);
        wins += hv_mo >= hv_ns;
        detail += format("%sseed %d %.3f vs %.3f", seed > 1 ? "; " : "", static_cast<int>(seed), hv_mo, hv_ns);
    }
    return { wins >= 4, format("MO ahead in %d/5; ", wins) + detail };
}

} // namespace acceptance
