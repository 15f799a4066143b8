#include "mmgp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mmgp {

namespace {

constexpr std::size_t max_kmeans_iterations = 100;

double distance(std::span<double const> a, std::span<double const> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double const d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::size_t nearest_center(std::span<double const> point, std::vector<std::vector<double>> const& centers)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        double const d = distance(point, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

} // namespace

std::vector<std::size_t> ClusterAssignment::members(std::size_t cluster) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < membership.size(); ++i) {
        if (membership[i] == cluster) {
            out.push_back(i);
        }
    }
    return out;
}

std::optional<std::size_t> ClusterAssignment::extreme_objective(std::size_t cluster) const
{
    for (std::size_t m = 0; m < extreme.size(); ++m) {
        if (extreme[m] == cluster) {
            return m;
        }
    }
    return std::nullopt;
}

std::vector<std::vector<double>> normalize_objectives(std::span<ObjectiveVector const> points)
{
    std::vector<std::vector<double>> out(points.size());
    if (points.empty()) {
        return out;
    }
    auto const dims = points.front().size();
    std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
    for (auto const& p : points) {
        for (std::size_t d = 0; d < dims; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[i].resize(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            double const range = hi[d] - lo[d];
            out[i][d] = range > 0.0 ? (points[i][d] - lo[d]) / range : 0.0;
        }
    }
    return out;
}

ClusterAssignment bklm_cluster(std::span<ObjectiveVector const> points, std::size_t k, Rng& rng)
{
    auto const n = points.size();
    if (k < 1 || n < k) {
        throw std::invalid_argument("bklm_cluster: need at least k points and k >= 1");
    }
    auto const normalized = normalize_objectives(points);
    auto const dims = points.front().size();

    // leader selection: minimum of a random objective, then farthest-point
    std::vector<std::size_t> leaders;
    {
        auto const obj = rng.below(dims);
        std::size_t first = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (normalized[i][obj] < normalized[first][obj]) {
                first = i;
            }
        }
        leaders.push_back(first);
        std::vector<double> nearest(n);
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = distance(normalized[i], normalized[first]);
        }
        while (leaders.size() < k) {
            auto const next = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
            leaders.push_back(next);
            for (std::size_t i = 0; i < n; ++i) {
                nearest[i] = std::min(nearest[i], distance(normalized[i], normalized[next]));
            }
        }
    }

    ClusterAssignment result;
    result.k = k;
    for (auto l : leaders) {
        result.centers.push_back(normalized[l]);
    }

    // k-means from the leaders
    std::vector<std::size_t> assigned(n, k);
    for (std::size_t iter = 0; iter < max_kmeans_iterations; ++iter) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            auto const c = nearest_center(normalized[i], result.centers);
            moved = moved || c != assigned[i];
            assigned[i] = c;
        }
        if (!moved) {
            break;
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(dims, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assigned[i]];
            for (std::size_t d = 0; d < dims; ++d) {
                sums[assigned[i]][d] += normalized[i][d];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue; // an empty cluster keeps its previous center
            }
            for (std::size_t d = 0; d < dims; ++d) {
                result.centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
            }
        }
    }

    // balanced assignment: each cluster takes its ceil(2N/k) nearest points
    auto const quota = std::min(n, (2 * n + k - 1) / k);
    std::vector<std::vector<std::size_t>> owners(n);
    std::vector<std::size_t> order(n);
    std::vector<double> dist(n);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = distance(normalized[i], result.centers[c]);
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(quota));
        std::sort(chosen.begin(), chosen.end());
        for (auto i : chosen) {
            owners[i].push_back(c);
        }
        result.balanced.push_back(std::move(chosen));
    }

    result.membership.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (owners[i].empty()) {
            result.membership[i] = nearest_center(normalized[i], result.centers);
        } else if (owners[i].size() == 1) {
            result.membership[i] = owners[i].front();
        } else {
            result.membership[i] = owners[i][rng.below(owners[i].size())];
        }
    }
    result.extreme.assign(dims, std::nullopt);
    return result;
}

void determine_extreme_clusters(ClusterAssignment& assignment, std::span<ObjectiveVector const> points, Rng& rng)
{
    if (points.empty()) {
        return;
    }
    auto const dims = points.front().size();
    auto const k = assignment.k;

    // Means over the balanced (pre-uniqueness) member sets, which are never
    // empty; the unique membership may leave a cluster without members.
    std::vector<std::vector<double>> mean(k, std::vector<double>(dims, 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
        for (auto i : assignment.balanced[c]) {
            ++count[c];
            for (std::size_t d = 0; d < dims; ++d) {
                mean[c][d] += points[i][d];
            }
        }
        for (std::size_t d = 0; d < dims; ++d) {
            mean[c][d] = count[c] ? mean[c][d] / static_cast<double>(count[c]) : 0.0;
        }
    }

    std::vector<std::size_t> objectives(dims);
    std::iota(objectives.begin(), objectives.end(), 0);
    rng.shuffle(objectives.begin(), objectives.end());

    assignment.extreme.assign(dims, std::nullopt);
    std::vector<bool> taken(k, false);
    for (auto m : objectives) {
        std::optional<std::size_t> best;
        for (std::size_t c = 0; c < k; ++c) {
            if (taken[c] || count[c] == 0) {
                continue;
            }
            if (!best || mean[c][m] < mean[*best][m]) {
                best = c;
            }
        }
        if (best) {
            assignment.extreme[m] = best;
            taken[*best] = true;
        }
    }
}

} // namespace mmgp
