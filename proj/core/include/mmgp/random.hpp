#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <utility>

namespace mmgp {

// Seedable random stream used everywhere in the library.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distributions layered on top are implemented here rather
// than taken from <random>, because the standard leaves those unspecified;
// this keeps every run bit-reproducible across standard libraries.
//
//   uniform01()  : top 53 bits of one draw scaled by 2^-53, in [0, 1)
//   below(n)     : rejection sampling on the raw 64-bit output, in [0, n)
//   normal(m, s) : Marsaglia polar method, spare value cached
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    std::uint64_t seed() const { return seed_; }

    double uniform01();
    double uniform(double lo, double hi);
    std::size_t below(std::size_t n);
    double normal(double mean, double sd);
    bool bernoulli(double p) { return uniform01() < p; }

    template <typename It>
    void shuffle(It first, It last)
    {
        auto const n = static_cast<std::size_t>(std::distance(first, last));
        for (std::size_t i = n; i > 1; --i) {
            auto const j = below(i);
            using std::swap;
            swap(*(first + static_cast<std::ptrdiff_t>(i - 1)), *(first + static_cast<std::ptrdiff_t>(j)));
        }
    }

    // Independent stream derived from this stream's seed and a stream id.
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace mmgp
