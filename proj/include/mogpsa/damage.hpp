#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "mogpsa/errors.hpp"

namespace mogpsa {

/// Gaussian damage: total severity D, centre mu [m], extent sigma [m].
struct DamageParams {
    double severity = 0.0;
    double center = 0.0;
    double extent = 0.0;

    bool operator==(const DamageParams&) const = default;
};

/// Search box for DamageParams plus the stiffness floor theta_min.
struct DamageBox {
    double max_severity = 1.0;
    double length = 1.0;
    double theta_min = 0.15;

    void validate() const
    {
        if (!(max_severity > 0.0 && max_severity <= 1.0))
            throw InvalidInput("damage box: max severity must lie in (0, 1]");
        if (!(length > 0.0)) throw InvalidInput("damage box: length must be > 0");
        if (!(theta_min > 0.0 && theta_min < 1.0))
            throw InvalidInput("damage box: theta_min must lie in (0, 1)");
    }

    bool contains(const DamageParams& x) const
    {
        return x.severity >= 0.0 && x.severity <= max_severity && x.center >= 0.0 && x.center <= length &&
               x.extent >= 0.0 && x.extent <= length;
    }
};

/// Error function, platform-independent.
///
/// Uses erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n (2x^2)^n x / (1*3*...*(2n+1)),
/// a series of positive terms (no cancellation), summed until terms drop below
/// 1e-17 of the sum. Beyond |x| = 6 the result is +-1 to double precision
/// (erfc(6) ~ 2e-17). Absolute error stays below 1e-15 over the real line.
inline double erf_series(double x)
{
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    if (ax >= 6.0) return x > 0 ? 1.0 : -1.0;
    const double x2 = ax * ax;
    double term = ax;
    double sum = ax;
    for (int n = 1; n < 200; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    const double r = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
    return x < 0 ? -std::min(r, 1.0) : std::min(r, 1.0);
}

/// Standard normal CDF.
inline double standard_normal_cdf(double z)
{
    return 0.5 * (1.0 + erf_series(z / std::numbers::sqrt2));
}

/// Damage density delta(s | x). Undefined for sigma = 0.
inline double damage_pdf(double s, const DamageParams& x)
{
    if (!(x.extent > 0.0)) throw InvalidInput("damage pdf needs sigma > 0; use damage_cdf");
    const double z = (s - x.center) / x.extent;
    return x.severity / (x.extent * std::sqrt(2.0 * std::numbers::pi)) * std::exp(-0.5 * z * z);
}

/// Cumulative damage weight F(s | x). sigma = 0 is the step D * H(s - mu), with D/2 at s = mu.
inline double damage_cdf(double s, const DamageParams& x)
{
    if (x.extent > 0.0) return x.severity * standard_normal_cdf((s - x.center) / x.extent);
    if (s > x.center) return x.severity;
    if (s < x.center) return 0.0;
    return 0.5 * x.severity;
}

/// Per-element stiffness scaling theta_e = 1 - L (F(s_e) - F(s_{e-1})) / l_e.
/// Values may fall below zero; feasibility is checked by `constraints`.
inline std::vector<double> theta(std::span<const double> node_positions, const DamageParams& x)
{
    if (node_positions.size() < 2) throw InvalidInput("theta needs at least two nodes");
    const double total = node_positions.back() - node_positions.front();
    std::vector<double> out(node_positions.size() - 1);
    double prev = damage_cdf(node_positions[0], x);
    for (std::size_t e = 0; e + 1 < node_positions.size(); ++e) {
        const double next = damage_cdf(node_positions[e + 1], x);
        const double le = node_positions[e + 1] - node_positions[e];
        out[e] = 1.0 - total * (next - prev) / le;
        prev = next;
    }
    return out;
}

struct ConstraintValue {
    double min_slack = 0.0; ///< min_e (theta_e - theta_min)
    bool feasible = false;  ///< min_slack >= 0
};

inline ConstraintValue constraints(std::span<const double> thetas, double theta_min)
{
    double c = std::numeric_limits<double>::infinity();
    for (double t : thetas) c = std::min(c, t - theta_min);
    return {c, c >= 0.0};
}

} // namespace mogpsa
