#include "mmgp/metrics.hpp"

#include "oracles.hpp"

#include <catch2/catch.hpp>

#include <algorithm>

using namespace mmgp;

namespace {

NormalizedFront raw(std::vector<ObjectiveVector> pts) { return NormalizedFront::assume_normalized(std::move(pts)); }

} // namespace

TEST_CASE("pareto filter")
{
    std::vector<ObjectiveVector> const pts { { 1, 5 }, { 2, 2 }, { 3, 3 }, { 2, 2 }, { 5, 1 }, { 1, 6 } };
    auto const f = pareto_filter(pts);
    REQUIRE(f == std::vector<ObjectiveVector> { { 1, 5 }, { 2, 2 }, { 5, 1 } });
    REQUIRE(pareto_filter(std::vector<ObjectiveVector> {}).empty());

    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ObjectiveVector> many;
        for (int i = 0; i < 100; ++i) {
            many.push_back({ static_cast<double>(rng.below(15)), static_cast<double>(rng.below(15)) });
        }
        auto fast = pareto_filter(many);
        auto slow = oracle::pareto(many);
        auto by_value = [](auto const& a, auto const& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); };
        std::sort(fast.begin(), fast.end(), by_value);
        std::sort(slow.begin(), slow.end(), by_value);
        REQUIRE(fast == slow);
    }
}

TEST_CASE("front-of-fronts normalization")
{
    // the dominated (9, 9) does not stretch the bounds
    std::vector<std::vector<ObjectiveVector>> const fronts { { { 1, 4 }, { 3, 2 } }, { { 2, 3 }, { 9, 9 } } };
    auto const n = normalize_fronts(fronts);
    REQUIRE(n.bounds.lo == std::vector<double> { 1, 2 });
    REQUIRE(n.bounds.hi == std::vector<double> { 3, 4 });
    REQUIRE(n.fronts[0].points()[0] == ObjectiveVector { 0, 1 });
    REQUIRE(n.fronts[1].points()[0] == ObjectiveVector { 0.5, 0.5 });
    REQUIRE(n.fronts[1].points()[1] == ObjectiveVector { 4, 3.5 });

    SECTION("a flat objective maps to zero")
    {
        std::vector<std::vector<ObjectiveVector>> const flat { { { 1, 7 } }, { { 1, 7 } } };
        auto const m = normalize_fronts(flat);
        REQUIRE(m.fronts[0].points()[0] == ObjectiveVector { 0, 0 });
    }
    SECTION("all empty throws")
    {
        std::vector<std::vector<ObjectiveVector>> const none { {}, {} };
        REQUIRE_THROWS_AS(normalize_fronts(none), std::invalid_argument);
    }
}

TEST_CASE("hypervolume by hand")
{
    REQUIRE(hypervolume_2d(raw({ { 0, 0 } })) == Approx(1.21));
    REQUIRE(hypervolume_2d(raw({})) == 0.0);
    REQUIRE(hypervolume_2d(raw({ { 1.2, 0 } })) == 0.0);
    // (0,1) and (1,0): union of 1.1 x 0.1 and 0.1 x 1.1 overlapping in 0.1 x 0.1
    REQUIRE(hypervolume_2d(raw({ { 0, 1 }, { 1, 0 } })) == Approx(0.11 + 0.11 - 0.01));
    REQUIRE(hypervolume_2d(raw({ { 0.5, 0.5 }, { 0.6, 0.6 } })) == Approx(0.36));
}

TEST_CASE("hypervolume agrees with Monte Carlo")
{
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ObjectiveVector> pts;
        auto const n = 1 + rng.below(30);
        for (std::size_t i = 0; i < n; ++i) {
            pts.push_back({ rng.uniform(0.0, 1.3), rng.uniform(0.0, 1.3) });
        }
        auto const exact = hypervolume_2d(raw(pts));
        auto const mc = oracle::monte_carlo_hv(pts, default_reference, 200000, rng);
        REQUIRE(std::abs(exact - mc.value) <= 4 * mc.stderr_ + 1e-9);
    }
}

TEST_CASE("hypervolume is monotone and order-free")
{
    Rng rng(3);
    std::vector<ObjectiveVector> pts;
    double last = 0.0;
    for (int i = 0; i < 40; ++i) {
        pts.push_back({ rng.uniform01(), rng.uniform01() });
        auto const hv = hypervolume_2d(raw(pts));
        REQUIRE(hv >= last - 1e-15);
        last = hv;
        auto shuffled = pts;
        rng.shuffle(shuffled.begin(), shuffled.end());
        REQUIRE(hypervolume_2d(raw(shuffled)) == Approx(hv).epsilon(1e-12));
    }
}

TEST_CASE("projection keeps the chosen pair")
{
    auto const p = project(raw({ { 1, 2, 3 } }), 2, 0);
    REQUIRE(p.points()[0] == ObjectiveVector { 3, 1 });
}
