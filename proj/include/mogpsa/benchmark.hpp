#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mogpsa/errors.hpp"
#include "mogpsa/image_point.hpp"
#include "mogpsa/nondominated.hpp"
#include "mogpsa/search.hpp"

namespace mogpsa {

struct BenchmarkReport {
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

/// O(|A|^2) reference filter: indices of points no other distinct image dominates,
/// one index per distinct image (the first occurrence).
inline std::vector<std::size_t> brute_force_nondominated(std::span<const ImagePoint> points)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (j == i) continue;
            if (points[j] == points[i]) {
                if (j < i) keep = false;
            } else if (dominates(points[j], points[i])) {
                keep = false;
            }
        }
        if (keep) out.push_back(i);
    }
    return out;
}

/// Outcome of checking a search result against the front of f(x) = (x^2, (x-1)^2).
struct ConvexFrontCheck {
    bool parameters_in_range = true; ///< every x in [0, 1] up to the slack
    bool mutually_nondominated = true;
    std::size_t touched = 0; ///< analytic reference points reached by the staircase
    std::size_t reference_points = 0;
};

/// The staircase through the returned images weakly dominates an analytic
/// point p when some image q has q <= p + tolerance in both components.
inline ConvexFrontCheck check_convex_front(const SearchResult& r, double slack, std::size_t reference_points,
                                           double tolerance)
{
    ConvexFrontCheck c;
    c.reference_points = reference_points;
    for (const auto& p : r.parameters)
        if (p[0] < -slack || p[0] > 1.0 + slack) c.parameters_in_range = false;
    // Distinct bi-objective images are mutually non-dominated iff, sorted by
    // the first objective, the second one strictly decreases.
    std::vector<std::pair<double, double>> sorted;
    for (const auto& q : r.images) {
        if (q.is_infeasible()) {
            c.mutually_nondominated = c.mutually_nondominated && r.images.size() == 1;
            continue;
        }
        sorted.emplace_back(q[0], q[1]);
    }
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].first == sorted[i - 1].first || sorted[i].second >= sorted[i - 1].second)
            c.mutually_nondominated = false;
    for (std::size_t k = 0; k < reference_points; ++k) {
        const double t = reference_points == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(reference_points - 1);
        const double p0 = t * t;
        const double p1 = (t - 1.0) * (t - 1.0);
        const bool hit = std::any_of(r.images.begin(), r.images.end(), [&](const ImagePoint& q) {
            return !q.is_infeasible() && q[0] <= p0 + tolerance && q[1] <= p1 + tolerance;
        });
        if (hit) ++c.touched;
    }
    return c;
}

namespace detail {

template <class F>
BenchmarkReport timed(std::string name, F body)
{
    BenchmarkReport rep;
    rep.name = std::move(name);
    const auto t0 = std::chrono::steady_clock::now();
    body(rep);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline BenchmarkReport bench_convex()
{
    return timed("convex", [](BenchmarkReport& rep) {
        const GridSpec spec{{-1.0}, {2.0}, 20};
        SearchOptions opts;
        opts.hall_of_fame = 10;
        const auto r = optimize(
            [](std::span<const double> x) {
                return ImagePoint::finite({x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)});
            },
            spec, opts);
        const double step = 3.0 / static_cast<double>(spec.extent());
        const auto c = check_convex_front(r, 3.0 * step, 50, 6.0 * step);
        rep.passed = c.parameters_in_range && c.mutually_nondominated && c.touched == c.reference_points;
        rep.detail = std::to_string(r.images.size()) + " front points, " + std::to_string(r.unique_evaluations) +
                     " evaluations, " + std::to_string(c.touched) + "/" + std::to_string(c.reference_points) +
                     " reference points reached";
    });
}

inline BenchmarkReport bench_sorting(std::size_t size)
{
    return timed("sorting-" + std::to_string(size), [size](BenchmarkReport& rep) {
        std::mt19937_64 rng(size);
        // Anti-correlated integer coordinates: many ties, duplicates and a wide front.
        std::uniform_int_distribution<int> coord(0, 200), jitter(0, 6);
        std::vector<ImagePoint> pts;
        for (std::size_t i = 0; i < size; ++i) {
            if (i % 50 == 7) {
                pts.push_back(ImagePoint::infeasible());
                continue;
            }
            const int x = coord(rng);
            pts.push_back(ImagePoint::finite({double(x), double(200 - x + jitter(rng))}));
        }
        const std::vector<double> lambda{1.0, 1.0};
        auto fast = presort_gyrm(pts, lambda);
        auto slow = brute_force_nondominated(pts);
        std::vector<ImagePoint> a, b;
        for (auto i : fast) a.push_back(pts[i]);
        for (auto i : slow) b.push_back(pts[i]);
        auto by_value = [](const ImagePoint& x, const ImagePoint& y) { return lexicographic(x, y) < 0; };
        std::sort(a.begin(), a.end(), by_value);
        std::sort(b.begin(), b.end(), by_value);
        rep.passed = a == b;
        rep.detail = std::to_string(b.size()) + " non-dominated of " + std::to_string(size);
    });
}

} // namespace detail

inline const std::vector<std::string>& benchmark_names()
{
    static const std::vector<std::string> names{"convex", "sorting-1000"};
    return names;
}

/// Runs the selected cases in the order given. Unknown names throw InvalidInput.
inline std::vector<BenchmarkReport> benchmark_suite(std::span<const std::string> selection)
{
    for (const auto& name : selection)
        if (std::find(benchmark_names().begin(), benchmark_names().end(), name) == benchmark_names().end())
            throw InvalidInput("unknown benchmark '" + name + "'");
    std::vector<BenchmarkReport> out;
    for (const auto& name : selection) {
        if (name == "convex")
            out.push_back(detail::bench_convex());
        else
            out.push_back(detail::bench_sorting(1000));
    }
    return out;
}

} // namespace mogpsa
