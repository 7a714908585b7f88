#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <vector>

#include "mogpsa/errors.hpp"

namespace mogpsa {

/// Objective vector, or the extreme-barrier value Infeasible (= +inf in every component).
class ImagePoint {
public:
    ImagePoint() = default;

    static ImagePoint finite(std::vector<double> values)
    {
        for (double v : values)
            if (std::isnan(v)) throw InvalidInput("image point component is NaN");
        ImagePoint p;
        p.values_ = std::move(values);
        p.infeasible_ = false;
        return p;
    }

    static ImagePoint infeasible() { return ImagePoint(); }

    bool is_infeasible() const noexcept { return infeasible_; }

    /// Components of a finite point; empty for Infeasible.
    std::span<const double> values() const noexcept { return values_; }

    /// Component i under the +inf convention.
    double operator[](std::size_t i) const noexcept
    {
        return infeasible_ ? std::numeric_limits<double>::infinity() : values_[i];
    }

    bool operator==(const ImagePoint&) const = default;

    /// Total order: finite points lexicographically, then Infeasible.
    friend std::weak_ordering lexicographic(const ImagePoint& a, const ImagePoint& b)
    {
        if (a.infeasible_ != b.infeasible_)
            return a.infeasible_ ? std::weak_ordering::greater : std::weak_ordering::less;
        if (a.infeasible_) return std::weak_ordering::equivalent;
        const std::size_t n = std::min(a.values_.size(), b.values_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.values_[i] < b.values_[i]) return std::weak_ordering::less;
            if (a.values_[i] > b.values_[i]) return std::weak_ordering::greater;
        }
        return a.values_.size() <=> b.values_.size();
    }

private:
    std::vector<double> values_;
    bool infeasible_ = true;
};

/// a dominates-or-equals b: b in {a} + R^m_+, with Infeasible as (+inf, ..., +inf).
inline bool dominates(const ImagePoint& a, const ImagePoint& b)
{
    if (b.is_infeasible()) return true;
    if (a.is_infeasible()) return false;
    const auto av = a.values();
    const auto bv = b.values();
    if (av.size() != bv.size()) throw InvalidInput("dominance between points of different dimension");
    for (std::size_t i = 0; i < av.size(); ++i)
        if (av[i] > bv[i]) return false;
    return true;
}

} // namespace mogpsa
