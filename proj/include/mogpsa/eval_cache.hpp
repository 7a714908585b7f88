#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <vector>

#include "mogpsa/grid.hpp"
#include "mogpsa/image_point.hpp"

namespace mogpsa {

/// Exact GridPoint -> ImagePoint memo with insert-once semantics.
class EvalCache {
public:
    std::optional<ImagePoint> find(const GridPoint& s) const
    {
        std::lock_guard lock(mutex_);
        auto it = map_.find(s);
        if (it == map_.end()) return std::nullopt;
        ++hits_;
        return it->second;
    }

    /// Stores `image` unless `s` is already present; returns the stored value.
    ImagePoint insert(const GridPoint& s, ImagePoint image)
    {
        std::lock_guard lock(mutex_);
        auto [it, inserted] = map_.try_emplace(s, std::move(image));
        if (inserted && it->second.is_infeasible()) ++infeasible_;
        return it->second;
    }

    bool contains(const GridPoint& s) const
    {
        std::lock_guard lock(mutex_);
        return map_.contains(s);
    }

    std::size_t size() const
    {
        std::lock_guard lock(mutex_);
        return map_.size();
    }

    std::size_t hits() const
    {
        std::lock_guard lock(mutex_);
        return hits_;
    }

    std::size_t infeasible() const
    {
        std::lock_guard lock(mutex_);
        return infeasible_;
    }

private:
    mutable std::mutex mutex_;
    std::unordered_map<GridPoint, ImagePoint, GridPointHash> map_;
    mutable std::size_t hits_ = 0;
    std::size_t infeasible_ = 0;
};

/// Images of `points`, evaluating cache misses (possibly on several threads)
/// through `evaluate`. Results are stored in the cache in input order, so the
/// outcome does not depend on the thread count.
inline std::vector<ImagePoint> evaluate_batch(std::span<const GridPoint> points, EvalCache& cache,
                                              const std::function<ImagePoint(const GridPoint&)>& evaluate,
                                              unsigned threads)
{
    std::vector<ImagePoint> images(points.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (auto hit = cache.find(points[i]))
            images[i] = std::move(*hit);
        else
            missing.push_back(i);
    }

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(missing.size())));
    if (workers <= 1) {
        for (auto i : missing) images[i] = evaluate(points[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < workers; ++t)
                pool.emplace_back([&] {
                    for (std::size_t k = next++; k < missing.size(); k = next++) {
                        try {
                            images[missing[k]] = evaluate(points[missing[k]]);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
        }
        if (failure) std::rethrow_exception(failure);
    }
    for (auto i : missing) images[i] = cache.insert(points[i], std::move(images[i]));
    return images;
}

} // namespace mogpsa
