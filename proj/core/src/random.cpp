#include "mmgp/random.hpp"

#include <cmath>
#include <stdexcept>

namespace mmgp {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

Rng::Rng(std::uint64_t seed)
    : seed_(seed)
    , engine_(seed)
{
}

double Rng::uniform01()
{
    return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

std::size_t Rng::below(std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("Rng::below: empty range");
    }
    auto const bound = static_cast<std::uint64_t>(n);
    // largest multiple of bound that fits; values at or above it are rejected
    auto const limit = max() - (max() % bound + 1) % bound;
    std::uint64_t x = engine_();
    while (x > limit) {
        x = engine_();
    }
    return static_cast<std::size_t>(x % bound);
}

double Rng::normal(double mean, double sd)
{
    if (spare_) {
        double const z = *spare_;
        spare_.reset();
        return mean + sd * z;
    }
    double u = 0;
    double v = 0;
    double s = 0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double const f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    return mean + sd * u * f;
}

Rng Rng::split(std::uint64_t stream) const
{
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x5851F42D4C957F2DULL)));
}

} // namespace mmgp
