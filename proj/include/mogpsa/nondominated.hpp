#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <ranges>
#include <span>
#include <vector>

#include "mogpsa/errors.hpp"
#include "mogpsa/image_point.hpp"

// Non-dominated sorting by the Graef-Younes reduction with presorting.
//
// Every routine takes a random-access range of elements plus a projection
// returning `const ImagePoint&`, and answers with indices into that range.
// Indices always come out in processing order, which makes the results
// deterministic for a given input order and weight vector.

namespace mogpsa {

namespace detail {

template <class R, class Proj>
const ImagePoint& image_at(const R& points, Proj& proj, std::size_t i)
{
    return std::invoke(proj, std::ranges::begin(points)[static_cast<std::ptrdiff_t>(i)]);
}

/// Membership test "a in B + R^2_+" in O(log |B|) for bi-objective points.
/// Keeps only the staircase of mutually non-dominated kept points, which
/// answers the query identically to scanning all of B.
class Staircase2 {
public:
    bool covers(const ImagePoint& a) const
    {
        if (a.is_infeasible()) return any_kept_;
        const auto v = a.values();
        auto it = stairs_.upper_bound(v[0]);
        if (it == stairs_.begin()) return false;
        return std::prev(it)->second <= v[1];
    }

    void insert(const ImagePoint& a)
    {
        any_kept_ = true;
        if (a.is_infeasible()) return;
        const auto v = a.values();
        auto [it, inserted] = stairs_.insert_or_assign(v[0], v[1]);
        (void)inserted;
        auto next = std::next(it);
        while (next != stairs_.end() && next->second >= v[1]) next = stairs_.erase(next);
    }

private:
    std::map<double, double> stairs_;
    bool any_kept_ = false;
};

/// Graef-Younes pass over `order`; returns the kept indices and appends the
/// rejected ones to `rejected` when given.
template <class R, class Proj>
std::vector<std::size_t> gyrm_pass(const R& points, std::span<const std::size_t> order, Proj& proj,
                                   std::vector<std::size_t>* rejected)
{
    std::vector<std::size_t> kept;
    bool bi_objective = true;
    for (auto i : order) {
        const auto& a = image_at(points, proj, i);
        if (!a.is_infeasible() && a.values().size() != 2) {
            bi_objective = false;
            break;
        }
    }

    if (bi_objective) {
        Staircase2 stairs;
        for (auto i : order) {
            const auto& a = image_at(points, proj, i);
            if (stairs.covers(a)) {
                if (rejected) rejected->push_back(i);
            } else {
                stairs.insert(a);
                kept.push_back(i);
            }
        }
        return kept;
    }

    for (auto i : order) {
        const auto& a = image_at(points, proj, i);
        bool covered = false;
        for (auto j : kept)
            if (dominates(image_at(points, proj, j), a)) {
                covered = true;
                break;
            }
        if (covered) {
            if (rejected) rejected->push_back(i);
        } else {
            kept.push_back(i);
        }
    }
    return kept;
}

inline void check_weights(std::span<const double> lambda)
{
    if (lambda.empty()) throw InvalidInput("presort weights are empty");
    for (double l : lambda)
        if (!(l > 0.0)) throw InvalidInput("presort weights must be positive");
}

/// One representative (the earliest index) per distinct image.
template <class R, class Proj>
std::vector<std::size_t> distinct_representatives(const R& points, Proj& proj)
{
    const auto n = static_cast<std::size_t>(std::ranges::size(points));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return lexicographic(image_at(points, proj, a), image_at(points, proj, b)) < 0;
    });
    std::vector<std::size_t> reps;
    for (std::size_t k = 0; k < n; ++k)
        if (k == 0 || image_at(points, proj, idx[k]) != image_at(points, proj, idx[k - 1]))
            reps.push_back(idx[k]);
    std::sort(reps.begin(), reps.end());
    return reps;
}

} // namespace detail

/// Single Graef-Younes pass in input order. Keeps a point iff no earlier kept
/// point dominates or equals it; the result contains ND(points).
template <std::ranges::random_access_range R, class Proj = std::identity>
std::vector<std::size_t> gyrm(const R& points, Proj proj = {})
{
    std::vector<std::size_t> order(static_cast<std::size_t>(std::ranges::size(points)));
    std::iota(order.begin(), order.end(), std::size_t{0});
    return detail::gyrm_pass(points, std::span<const std::size_t>(order), proj, nullptr);
}

/// Ascending order by the weighted sum lambda^T a. Ties fall back to the
/// lexicographic order of the values, then to input position; Infeasible
/// points come last. The lexicographic tie-break keeps a dominating point
/// ahead of the points it dominates even when rounding makes their weighted
/// sums equal.
template <std::ranges::random_access_range R, class Proj = std::identity>
std::vector<std::size_t> presort_order(const R& points, std::span<const double> lambda, Proj proj = {})
{
    detail::check_weights(lambda);
    const auto n = static_cast<std::size_t>(std::ranges::size(points));
    // Sorting compact records keeps the comparisons in cache; images are only
    // touched again when two weighted sums coincide.
    struct Entry {
        bool infeasible;
        double key;
        std::size_t index;
    };
    std::vector<Entry> entries(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = detail::image_at(points, proj, i);
        if (a.is_infeasible()) {
            entries[i] = {true, 0.0, i};
            continue;
        }
        const auto v = a.values();
        if (v.size() != lambda.size()) throw InvalidInput("presort weights do not match point dimension");
        double s = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) s += lambda[j] * v[j];
        entries[i] = {false, s, i};
    }
    std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
        if (a.infeasible != b.infeasible) return b.infeasible;
        if (!a.infeasible && a.key != b.key) return a.key < b.key;
        if (!a.infeasible) {
            const auto c = lexicographic(detail::image_at(points, proj, a.index), detail::image_at(points, proj, b.index));
            if (c != 0) return c < 0;
        }
        return a.index < b.index;
    });
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = entries[i].index;
    return order;
}

/// Exact non-dominated set: presort by the weighted sum, then one Graef-Younes
/// pass. Duplicated images are reported once (their earliest occurrence).
/// Cost O(|A| log |A| + |A| |ND(A)|) in general, O(|A| log |A|) for m = 2.
template <std::ranges::random_access_range R, class Proj = std::identity>
std::vector<std::size_t> presort_gyrm(const R& points, std::span<const double> lambda, Proj proj = {})
{
    const auto order = presort_order(points, lambda, proj);
    return detail::gyrm_pass(points, std::span<const std::size_t>(order), proj, nullptr);
}

/// All levels when passed as `levels`.
inline constexpr std::size_t all_levels = std::numeric_limits<std::size_t>::max();

/// Pareto fronts B_1, ..., B_k of the distinct images: B_i = ND(A \ (B_1 u ... u B_{i-1})).
/// The presort is computed once and reused for every level. Stops early when
/// the points run out, so `all_levels` partitions the distinct images.
template <std::ranges::random_access_range R, class Proj = std::identity>
std::vector<std::vector<std::size_t>> pareto_fronts(const R& points, std::span<const double> lambda,
                                                    std::size_t levels, Proj proj = {})
{
    if (levels < 1) throw InvalidInput("pareto_fronts needs at least one level");
    const auto reps = detail::distinct_representatives(points, proj);
    const auto sorted = presort_order(points, lambda, proj);
    std::vector<bool> is_rep(static_cast<std::size_t>(std::ranges::size(points)), false);
    for (auto r : reps) is_rep[r] = true;
    std::vector<std::size_t> remaining;
    remaining.reserve(reps.size());
    for (auto i : sorted)
        if (is_rep[i]) remaining.push_back(i);

    std::vector<std::vector<std::size_t>> fronts;
    while (!remaining.empty() && fronts.size() < levels) {
        std::vector<std::size_t> rest;
        fronts.push_back(detail::gyrm_pass(points, std::span<const std::size_t>(remaining), proj, &rest));
        remaining = std::move(rest);
    }
    return fronts;
}

/// Hall-of-Fame update: unions fronts level by level until it holds at least
/// min(T, number of distinct images) points. Always contains ND(points);
/// T = 1 gives exactly the first front.
template <std::ranges::random_access_range R, class Proj = std::identity>
std::vector<std::size_t> update_hof(const R& points, std::size_t T, std::span<const double> lambda,
                                    Proj proj = {})
{
    if (T < 1) throw InvalidInput("hall of fame size T must be >= 1");
    const auto reps = detail::distinct_representatives(points, proj);
    const auto sorted = presort_order(points, lambda, proj);
    std::vector<bool> is_rep(static_cast<std::size_t>(std::ranges::size(points)), false);
    for (auto r : reps) is_rep[r] = true;
    std::vector<std::size_t> remaining;
    remaining.reserve(reps.size());
    for (auto i : sorted)
        if (is_rep[i]) remaining.push_back(i);

    const std::size_t target = std::min(T, reps.size());
    std::vector<std::size_t> hof;
    while (hof.size() < target) {
        std::vector<std::size_t> rest;
        auto front = detail::gyrm_pass(points, std::span<const std::size_t>(remaining), proj, &rest);
        hof.insert(hof.end(), front.begin(), front.end());
        remaining = std::move(rest);
    }
    return hof;
}

/// Every index whose image equals the image of one of `selected` (g^{-1} of a
/// set of images), in ascending index order.
template <std::ranges::random_access_range R, class Proj = std::identity>
std::vector<std::size_t> expand_equal_images(const R& points, std::span<const std::size_t> selected,
                                             Proj proj = {})
{
    std::vector<std::size_t> chosen(selected.begin(), selected.end());
    auto less = [&](std::size_t a, std::size_t b) {
        return lexicographic(detail::image_at(points, proj, a), detail::image_at(points, proj, b)) < 0;
    };
    std::sort(chosen.begin(), chosen.end(), less);
    std::vector<std::size_t> out;
    const auto n = static_cast<std::size_t>(std::ranges::size(points));
    for (std::size_t i = 0; i < n; ++i)
        if (std::binary_search(chosen.begin(), chosen.end(), i, less)) out.push_back(i);
    return out;
}

} // namespace mogpsa
