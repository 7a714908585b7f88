#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mogpsa/errors.hpp"
#include "mogpsa/eval_cache.hpp"
#include "mogpsa/grid.hpp"
#include "mogpsa/image_point.hpp"
#include "mogpsa/nondominated.hpp"

namespace mogpsa {

/// Objective over the original box; return ImagePoint::infeasible() for the barrier.
using Objective = std::function<ImagePoint(std::span<const double>)>;

struct SearchOptions {
    std::size_t hall_of_fame = 50;                               ///< T
    std::size_t budget = std::numeric_limits<std::size_t>::max(); ///< max unique evaluations
    std::vector<double> weights;                                 ///< presort lambda; empty = all ones
    unsigned threads = 1;
};

struct IterationRecord {
    std::size_t iteration = 0;
    std::size_t base_size = 0;   ///< |B| entering the iteration
    std::size_t sample_size = 0; ///< |S|
    StepWidths steps;            ///< w used for the samples
    std::size_t unique_evaluations = 0;
    std::size_t cache_hits = 0;
    std::size_t infeasible = 0;
    std::size_t hall_of_fame_size = 0; ///< |B^| after the update
    bool base_changed = false;
};

struct SearchResult {
    std::vector<GridPoint> grid_points;          ///< B^ after the final sort
    std::vector<std::vector<double>> parameters; ///< h[B^]
    std::vector<ImagePoint> images;              ///< g[B^], mutually non-dominated
    std::vector<IterationRecord> trace;
    StepWidths final_steps;
    std::size_t unique_evaluations = 0;
    std::size_t cache_hits = 0;
    std::size_t infeasible = 0;
    bool budget_exhausted = false;
};

/// Multi-objective global pattern search on the lattice {0..2^N}^n.
///
/// Starts from the box centre with w = 2^(N-1) in every coordinate. Each
/// iteration polls s_i^{+-}(b) around every base point, evaluates the new
/// samples through the cache, and replaces the base set by the grid points
/// carrying the Hall-of-Fame images of B u S. When the base set is unchanged
/// the largest step (smallest index on ties) is halved; the loop ends once
/// every step is 1, or early when the evaluation budget runs out. The result
/// is the first-level front of the final base set.
inline SearchResult optimize(const Objective& objective, const GridSpec& spec, const SearchOptions& options)
{
    spec.validate();
    if (options.hall_of_fame < 1) throw InvalidInput("hall of fame size T must be >= 1");
    if (options.budget < 1) throw InvalidInput("evaluation budget must be >= 1");
    if (!objective) throw InvalidInput("objective is empty");

    EvalCache cache;
    auto evaluate = [&](const GridPoint& s) {
        const auto x = h_transform(spec, s);
        return objective(std::span<const double>(x));
    };
    std::vector<double> weights = options.weights;
    auto image_of = [](const std::pair<GridPoint, ImagePoint>& p) -> const ImagePoint& { return p.second; };

    SearchResult result;
    StepWidths steps(spec.dim(), spec.extent() / 2);
    std::vector<GridPoint> base{spec.center()};
    GridPointSet visited(base.begin(), base.end());
    evaluate_batch(base, cache, evaluate, options.threads);

    for (std::size_t iter = 1;; ++iter) {
        IterationRecord rec;
        rec.iteration = iter;
        rec.base_size = base.size();
        rec.steps = steps;

        auto samples = sample_pattern(base, steps, spec, visited);
        const std::size_t remaining = options.budget - std::min(options.budget, cache.size());
        if (samples.size() >= remaining) {
            if (samples.size() > remaining) samples.resize(remaining);
            result.budget_exhausted = true;
        }
        visited.insert(samples.begin(), samples.end());
        rec.sample_size = samples.size();

        std::vector<GridPoint> pool = base;
        pool.insert(pool.end(), samples.begin(), samples.end());
        auto images = evaluate_batch(pool, cache, evaluate, options.threads);

        std::vector<std::pair<GridPoint, ImagePoint>> tagged;
        tagged.reserve(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) tagged.emplace_back(std::move(pool[i]), std::move(images[i]));
        if (weights.empty()) {
            for (const auto& t : tagged)
                if (!t.second.is_infeasible()) {
                    weights.assign(t.second.values().size(), 1.0);
                    break;
                }
            if (weights.empty()) weights.assign(1, 1.0);
        }

        const auto hof = update_hof(tagged, options.hall_of_fame, weights, image_of);
        const auto carriers = expand_equal_images(tagged, hof, image_of);
        std::vector<GridPoint> next;
        next.reserve(carriers.size());
        for (auto i : carriers) next.push_back(tagged[i].first);
        std::sort(next.begin(), next.end());

        rec.unique_evaluations = cache.size();
        rec.cache_hits = cache.hits();
        rec.infeasible = cache.infeasible();
        rec.hall_of_fame_size = next.size();
        rec.base_changed = next != base;
        result.trace.push_back(rec);

        if (result.budget_exhausted) {
            base = std::move(next);
            break;
        }
        if (rec.base_changed) {
            base = std::move(next);
            continue;
        }
        const auto widest = std::max_element(steps.begin(), steps.end());
        if (*widest == 1) break;
        *widest /= 2;
    }

    std::vector<std::pair<GridPoint, ImagePoint>> final_pool;
    final_pool.reserve(base.size());
    for (const auto& b : base) final_pool.emplace_back(b, *cache.find(b));
    const auto front = presort_gyrm(final_pool, weights, image_of);
    const auto carriers = expand_equal_images(final_pool, front, image_of);
    for (auto i : carriers) {
        result.grid_points.push_back(final_pool[i].first);
        result.parameters.push_back(h_transform(spec, final_pool[i].first));
        result.images.push_back(final_pool[i].second);
    }
    result.final_steps = steps;
    result.unique_evaluations = cache.size();
    result.cache_hits = cache.hits();
    result.infeasible = cache.infeasible();
    return result;
}

} // namespace mogpsa
