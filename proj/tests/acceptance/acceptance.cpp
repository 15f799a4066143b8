// Prints one line per criterion; exits nonzero if any fails.

#include "criteria.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <vector>

namespace {

struct Criterion {
    int number;
    char const* name;
    std::function<acceptance::Outcome()> check;
};

} // namespace

int main(int argc, char** argv)
{
    bool yacht = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--yacht") == 0) {
            yacht = true;
        } else {
            std::fprintf(stderr, "usage: %s [--yacht]\n", argv[0]);
            return 2;
        }
    }

    using namespace acceptance;
    std::vector<Criterion> const all = yacht
        ? std::vector<Criterion> {
              { 8, "yacht MO vs SO extremes", yacht_mo_vs_so },
              { 9, "yacht MO vs NSGA-II hypervolume", yacht_mo_vs_nsga2 },
          }
        : std::vector<Criterion> {
              { 1, "example 1 trade-off", example_one },
              { 2, "example 2 hidden variable", example_two },
              { 3, "objective identities", objective_identities },
              { 4, "D1 blind spot", d1_blind_spot },
              { 5, "oracle equivalences", oracle_equivalences },
              { 6, "acceptance invariants", acceptance_invariants },
              { 7, "hypervolume identities", hv_identities },
              { 10, "determinism", determinism },
          };

    int failed = 0;
    for (auto const& c : all) {
        auto const start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (std::exception const& e) {
            o = { false, std::string("exception: ") + e.what() };
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s  %s  [%s] (%.1fs)\n", c.number, o.pass ? "PASS" : "FAIL", c.name,
            o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
