#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "mogpsa/errors.hpp"

namespace mogpsa {

/// Integer lattice point in [0, 2^N]^n. Used directly as an exact cache key.
using GridPoint = std::vector<std::int64_t>;

struct GridPointHash {
    std::size_t operator()(const GridPoint& p) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (auto c : p) {
            h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using GridPointSet = std::unordered_set<GridPoint, GridPointHash>;

/// Box [lower, upper] mapped onto the dyadic lattice {0, ..., 2^N}^n.
struct GridSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    int resolution = 20; ///< N

    std::size_t dim() const noexcept { return lower.size(); }
    std::int64_t extent() const noexcept { return std::int64_t{1} << resolution; }

    void validate() const
    {
        if (resolution < 1 || resolution > 52)
            throw InvalidInput("grid resolution N must lie in [1, 52]");
        if (lower.empty()) throw InvalidInput("grid needs at least one dimension");
        if (lower.size() != upper.size()) throw InvalidInput("grid bounds have different lengths");
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw InvalidInput("grid bound " + std::to_string(i) + ": lower must be < upper");
    }

    bool contains(const GridPoint& s) const
    {
        if (s.size() != dim()) return false;
        return std::all_of(s.begin(), s.end(), [&](std::int64_t c) { return c >= 0 && c <= extent(); });
    }

    GridPoint center() const { return GridPoint(dim(), extent() / 2); }
};

/// h(s)_i = x^-_i + 2^-N s_i (x^+_i - x^-_i); both box corners are hit exactly.
inline std::vector<double> h_transform(const GridSpec& spec, const GridPoint& s)
{
    if (s.size() != spec.dim()) throw InvalidInput("grid point has wrong dimension");
    std::vector<double> x(s.size());
    const double scale = static_cast<double>(spec.extent());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0)
            x[i] = spec.lower[i];
        else if (s[i] == spec.extent())
            x[i] = spec.upper[i];
        else
            x[i] = spec.lower[i] + static_cast<double>(s[i]) / scale * (spec.upper[i] - spec.lower[i]);
    }
    return x;
}

/// Per-coordinate step widths, each a power of two in [1, 2^(N-1)].
using StepWidths = std::vector<std::int64_t>;

/// Poll points s_i^{+-}(b) = b +- w_i e^i of every base point that lie inside
/// the lattice box and outside `visited`; duplicates dropped, order is
/// (base, coordinate, minus before plus).
inline std::vector<GridPoint> sample_pattern(std::span<const GridPoint> bases, const StepWidths& steps,
                                             const GridSpec& spec, const GridPointSet& visited)
{
    if (steps.size() != spec.dim()) throw InvalidInput("step widths have wrong dimension");
    std::vector<GridPoint> out;
    GridPointSet seen;
    for (const auto& b : bases) {
        if (b.size() != spec.dim()) throw InvalidInput("base point has wrong dimension");
        for (std::size_t i = 0; i < spec.dim(); ++i) {
            for (int sign : {-1, +1}) {
                GridPoint s = b;
                s[i] += sign * steps[i];
                if (s[i] < 0 || s[i] > spec.extent()) continue;
                if (visited.contains(s) || seen.contains(s)) continue;
                seen.insert(s);
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

} // namespace mogpsa
