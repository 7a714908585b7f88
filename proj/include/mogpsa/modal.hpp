#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mogpsa/beam_fe.hpp"
#include "mogpsa/csv.hpp"
#include "mogpsa/errors.hpp"
#include "mogpsa/log.hpp"

namespace mogpsa {

/// Sensor positions given as node indices; each selects the node's translational DoF.
struct SensorLayout {
    std::vector<std::size_t> nodes;

    std::size_t size() const noexcept { return nodes.size(); }

    /// Row indices of the sensed DoFs in `sys`, validating the layout on the way.
    std::vector<std::size_t> rows(const AssembledSystem& sys) const
    {
        if (nodes.empty()) throw InvalidInput("sensor layout is empty");
        std::vector<std::size_t> sorted = nodes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidInput("sensor layout has duplicate nodes");
        std::vector<std::size_t> out;
        out.reserve(nodes.size());
        for (auto node : nodes) {
            if (node >= sys.node_row.size())
                throw InvalidInput("sensor on nonexistent node " + std::to_string(node));
            if (sys.node_row[node] < 0)
                throw InvalidInput("sensor on clamped node " + std::to_string(node));
            out.push_back(static_cast<std::size_t>(sys.node_row[node]));
        }
        return out;
    }

    /// `count` sensors spread uniformly over nodes 1..n (the last one at the tip).
    static SensorLayout uniform(std::size_t elements, std::size_t count)
    {
        if (count == 0 || count > elements) throw InvalidInput("uniform layout: bad sensor count");
        SensorLayout l;
        for (std::size_t i = 1; i <= count; ++i)
            l.nodes.push_back((i * elements + count / 2) / count);
        return l;
    }
};

/// Frequencies, raw eigenvalues and sensor-gathered unit mode shapes of one model state.
struct ModalResult {
    std::vector<double> frequencies;              ///< [Hz]
    std::vector<double> eigenvalues;              ///< lambda^2 [rad^2/s^2]
    std::vector<std::vector<double>> mode_shapes; ///< one unit vector per mode

    std::size_t mode_count() const noexcept { return frequencies.size(); }
    std::size_t sensor_count() const noexcept { return mode_shapes.empty() ? 0 : mode_shapes[0].size(); }

    bool operator==(const ModalResult&) const = default;
};

/// Lowest eigenpairs of K u = lambda^2 M u; eigenvectors are columns, M-orthonormal.
struct EigenPairs {
    std::vector<double> values;
    Eigen::MatrixXd vectors;
};

/// Solves the symmetric-definite banded pencil for its `count` smallest eigenpairs.
/// Throws NumericalError with the failing pivot when M is not positive definite.
///
/// The solve runs on the reciprocal pencil M u = mu (K + shift M) u and keeps the
/// largest mu = 1 / (lambda^2 + shift). Bisection resolves eigenvalues to an
/// absolute tolerance of order eps * (largest eigenvalue), so solving (K, M)
/// directly would give the low modes of a fine mesh only a few correct digits;
/// on the reciprocal pencil the low modes are the large ones. The shift is
/// zero when K is positive definite (clamped beam) and a tiny multiple of the
/// stiffness scale when it is singular (free beam).
inline EigenPairs solve_generalized_eig(const AssembledSystem& sys, std::size_t count)
{
    const std::size_t n = sys.dim();
    if (count < 1 || count > n)
        throw InvalidInput("requested " + std::to_string(count) + " modes from a system of dimension " +
                           std::to_string(n));
    if (sys.mass.dim() != n || sys.mass.half_bandwidth() != sys.stiffness.half_bandwidth())
        throw InvalidInput("stiffness and mass storage do not match");

    const auto kd = static_cast<lapack_int>(sys.stiffness.half_bandwidth());
    const auto ni = static_cast<lapack_int>(n);
    {
        std::vector<double> chol = sys.mass.lower_band();
        const lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', ni, kd, chol.data(), kd + 1);
        if (info > 0)
            throw NumericalError("mass matrix is not positive definite", static_cast<std::size_t>(info));
        if (info < 0) throw InvalidInput("mass factorization rejected argument " + std::to_string(-info));
    }

    double shift = 0.0;
    std::vector<double> bb = sys.stiffness.lower_band();
    {
        std::vector<double> chol = bb;
        if (LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', ni, kd, chol.data(), kd + 1) != 0) {
            double scale = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                scale = std::max(scale, sys.stiffness(i, i) / sys.mass(i, i));
            shift = 1e-9 * scale;
            const auto& m = sys.mass.lower_band();
            for (std::size_t i = 0; i < bb.size(); ++i) bb[i] += shift * m[i];
        }
    }

    std::vector<double> ab = sys.mass.lower_band();
    std::vector<double> q(n * n);
    std::vector<double> w(n);
    std::vector<double> z(n * count);
    std::vector<lapack_int> ifail(n);
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dsbgvx(LAPACK_COL_MAJOR, 'V', 'I', 'L', ni, kd, kd, ab.data(), kd + 1,
                                           bb.data(), kd + 1, q.data(), ni, 0.0, 0.0,
                                           ni - static_cast<lapack_int>(count) + 1, ni, abstol, &found, w.data(),
                                           z.data(), ni, ifail.data());
    if (info > ni)
        throw NumericalError("stiffness matrix is not positive definite", static_cast<std::size_t>(info - ni));
    if (info > 0)
        throw NumericalError("eigenvectors failed to converge", static_cast<std::size_t>(info));
    if (info < 0)
        throw InvalidInput("generalized eigensolver rejected argument " + std::to_string(-info));
    if (static_cast<std::size_t>(found) != count)
        throw NumericalError("eigensolver returned too few eigenpairs", static_cast<std::size_t>(found));

    // Largest mu first means smallest lambda^2 first; rescale vectors to unit M-norm.
    EigenPairs out;
    out.values.resize(count);
    out.vectors.resize(ni, static_cast<Eigen::Index>(count));
    const Eigen::Map<const Eigen::MatrixXd> zm(z.data(), ni, static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k) {
        const auto src = static_cast<Eigen::Index>(count - 1 - k);
        const double mu = w[count - 1 - k];
        if (!(mu > 0.0)) throw NumericalError("nonpositive reciprocal eigenvalue", k + 1);
        out.values[k] = 1.0 / mu - shift;
        const Eigen::VectorXd u = zm.col(src);
        const double mnorm = std::sqrt(u.dot(sys.mass.multiply(u)));
        out.vectors.col(static_cast<Eigen::Index>(k)) = u / mnorm;
    }
    return out;
}

/// Picks the sensed rows of u and scales them to unit Euclidean norm.
inline std::vector<double> gather_normalize(std::span<const double> u, std::span<const std::size_t> rows)
{
    std::vector<double> g;
    g.reserve(rows.size());
    double sq = 0.0;
    for (auto r : rows) {
        if (r >= u.size()) throw InvalidInput("gather row out of range");
        g.push_back(u[r]);
        sq += u[r] * u[r];
    }
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0)) throw DegenerateMode("mode shape vanishes at every sensor");
    for (auto& v : g) v /= norm;
    return g;
}

/// Flips `shape` when it points away from `reference`; an exactly orthogonal pair is left alone.
inline std::vector<double> align_sign(std::span<const double> shape, std::span<const double> reference)
{
    if (shape.size() != reference.size()) throw InvalidInput("align_sign: size mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < shape.size(); ++i) dot += shape[i] * reference[i];
    std::vector<double> out(shape.begin(), shape.end());
    if (dot < 0.0)
        for (auto& v : out) v = -v;
    return out;
}

namespace detail {

/// Sign convention without a reference: the largest-magnitude entry (first on ties) is positive.
inline void make_largest_positive(std::vector<double>& shape)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < shape.size(); ++i)
        if (std::abs(shape[i]) > std::abs(shape[best])) best = i;
    if (!shape.empty() && shape[best] < 0.0)
        for (auto& v : shape) v = -v;
}

inline double frequency_from_eigenvalue(double lambda2)
{
    return std::sqrt(std::max(lambda2, 0.0)) / (2.0 * std::numbers::pi);
}

inline double abs_dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
    return std::abs(d);
}

} // namespace detail

/// Number of extra eigenpairs computed beyond the requested ones so that a mode
/// which drops below its neighbour can still be paired with its reference.
inline constexpr std::size_t pairing_spare_modes = 2;

/// Eigenfrequencies and gathered unit mode shapes for the state theta.
///
/// Without a reference the modes come out in ascending frequency with the
/// largest sensor entry positive. With a reference each reference mode is
/// matched to the computed mode of largest |<phi, phi_ref>| (greedy over all
/// pairs in descending correlation) and sign-aligned to it, so entry k of the
/// result always describes the same physical mode as entry k of the reference.
inline ModalResult modal_analysis(const BeamModel& model, std::span<const double> theta,
                                  const SensorLayout& layout, std::size_t modes,
                                  const ModalResult* reference = nullptr)
{
    if (modes < 1) throw InvalidInput("at least one mode must be requested");
    const AssembledSystem sys = assemble(model, theta);
    const auto rows = layout.rows(sys);
    if (reference && (reference->mode_count() != modes || reference->sensor_count() != rows.size()))
        throw InvalidInput("reference modal result does not match the requested modes/sensors");

    // Same eigensolver call with and without a reference, so that theta = 1
    // reproduces the healthy reference bit for bit.
    const std::size_t candidates = std::min(sys.dim(), modes + pairing_spare_modes);
    if (modes > candidates) throw InvalidInput("more modes requested than degrees of freedom");
    const EigenPairs eig = solve_generalized_eig(sys, candidates);

    std::vector<std::vector<double>> shapes;
    shapes.reserve(candidates);
    for (std::size_t j = 0; j < candidates; ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        const std::span<const double> u(eig.vectors.col(col).data(), sys.dim());
        if (j < modes) {
            shapes.push_back(gather_normalize(u, rows));
            continue;
        }
        try {
            shapes.push_back(gather_normalize(u, rows));
        } catch (const DegenerateMode&) {
            shapes.emplace_back(rows.size(), 0.0); // spare mode invisible to the sensors
        }
    }

    ModalResult out;
    out.frequencies.resize(modes);
    out.eigenvalues.resize(modes);
    out.mode_shapes.resize(modes);

    if (!reference) {
        for (std::size_t k = 0; k < modes; ++k) {
            out.eigenvalues[k] = eig.values[k];
            out.frequencies[k] = detail::frequency_from_eigenvalue(eig.values[k]);
            detail::make_largest_positive(shapes[k]);
            out.mode_shapes[k] = std::move(shapes[k]);
        }
        return out;
    }

    struct Candidate {
        double corr;
        std::size_t ref;
        std::size_t mode;
    };
    std::vector<Candidate> pairs;
    pairs.reserve(modes * candidates);
    for (std::size_t k = 0; k < modes; ++k)
        for (std::size_t j = 0; j < candidates; ++j)
            pairs.push_back({detail::abs_dot(shapes[j], reference->mode_shapes[k]), k, j});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Candidate& a, const Candidate& b) { return a.corr > b.corr; });

    std::vector<bool> ref_done(modes, false);
    std::vector<bool> mode_used(candidates, false);
    std::size_t assigned = 0;
    for (std::size_t p = 0; p < pairs.size() && assigned < modes; ++p) {
        const auto& c = pairs[p];
        if (ref_done[c.ref] || mode_used[c.mode]) continue;
        if (p + 1 < pairs.size() && pairs[p + 1].corr == c.corr && pairs[p + 1].ref == c.ref &&
            !mode_used[pairs[p + 1].mode])
            warn("mode pairing: reference mode " + std::to_string(c.ref + 1) +
                 " correlates equally with two modes; using the lower frequency");
        ref_done[c.ref] = true;
        mode_used[c.mode] = true;
        ++assigned;
        out.eigenvalues[c.ref] = eig.values[c.mode];
        out.frequencies[c.ref] = detail::frequency_from_eigenvalue(eig.values[c.mode]);
        out.mode_shapes[c.ref] = align_sign(shapes[c.mode], reference->mode_shapes[c.ref]);
    }
    return out;
}

/// One row per mode: mode index, frequency, then the shape entries.
inline csv::Table modal_to_csv(const ModalResult& r)
{
    std::vector<std::string> header{"mode", "frequency_hz"};
    for (std::size_t i = 0; i < r.sensor_count(); ++i) header.push_back("phi_" + std::to_string(i + 1));
    csv::Table t(std::move(header));
    for (std::size_t k = 0; k < r.mode_count(); ++k) {
        std::vector<std::string> row{std::to_string(k + 1), csv::format(r.frequencies[k])};
        for (double v : r.mode_shapes[k]) row.push_back(csv::format(v));
        t.add_row(std::move(row));
    }
    return t;
}

/// Inverse of `modal_to_csv`. Shapes are renormalized to unit length on import.
inline ModalResult modal_from_csv(const csv::Table& t)
{
    if (t.header().size() < 3 || t.header()[1] != "frequency_hz")
        throw InvalidInput("modal csv needs columns mode,frequency_hz,phi_1,...");
    ModalResult r;
    for (const auto& row : t.rows()) {
        const double f = csv::parse_double(row[1]);
        if (!(f >= 0.0)) throw InvalidInput("modal csv: negative frequency");
        r.frequencies.push_back(f);
        const double omega = 2.0 * std::numbers::pi * f;
        r.eigenvalues.push_back(omega * omega);
        std::vector<double> shape;
        for (std::size_t c = 2; c < row.size(); ++c) shape.push_back(csv::parse_double(row[c]));
        std::vector<std::size_t> all(shape.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        r.mode_shapes.push_back(gather_normalize(shape, all));
    }
    if (r.frequencies.empty()) throw InvalidInput("modal csv has no modes");
    return r;
}

} // namespace mogpsa
