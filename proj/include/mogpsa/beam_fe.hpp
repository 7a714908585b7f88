#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mogpsa/banded.hpp"
#include "mogpsa/errors.hpp"

namespace mogpsa {

enum class BeamTheory { EulerBernoulli, Timoshenko };
enum class Boundary { ClampedAtNodeZero, Free };

/// Cross-section and material of one beam element.
struct SectionMaterial {
    double youngs_modulus = 0.0;       ///< undamaged E0 [Pa]
    double density = 0.0;              ///< rho [kg/m^3]
    double area = 0.0;                 ///< A [m^2]
    double area_moment = 0.0;          ///< I [m^4]
    double shear_modulus = 0.0;        ///< G [Pa], Timoshenko only
    double shear_constant = 0.0;       ///< kappa, Timoshenko only
    double extra_linear_density = 0.0; ///< nonstructural mass [kg/m]

    /// Rectangular section: A = w t, I = w t^3 / 12.
    static SectionMaterial rectangular(double youngs_modulus, double density, double width,
                                       double thickness)
    {
        SectionMaterial s;
        s.youngs_modulus = youngs_modulus;
        s.density = density;
        s.area = width * thickness;
        s.area_moment = width * thickness * thickness * thickness / 12.0;
        return s;
    }

    double linear_density() const noexcept { return density * area + extra_linear_density; }

    void validate(BeamTheory theory) const
    {
        if (!(youngs_modulus > 0.0)) throw InvalidInput("section: Young's modulus must be > 0");
        if (!(density > 0.0)) throw InvalidInput("section: density must be > 0");
        if (!(area > 0.0)) throw InvalidInput("section: area must be > 0");
        if (!(area_moment > 0.0)) throw InvalidInput("section: area moment must be > 0");
        if (!(extra_linear_density >= 0.0))
            throw InvalidInput("section: extra linear density must be >= 0");
        if (theory == BeamTheory::Timoshenko) {
            if (!(shear_modulus > 0.0)) throw InvalidInput("section: shear modulus must be > 0");
            if (!(shear_constant > 0.0)) throw InvalidInput("section: shear constant must be > 0");
        }
    }
};

struct PointMass {
    std::size_t node = 0;
    double mass = 0.0; ///< [kg], acts on the translational DoF only
};

/// One-dimensional beam discretized into n elements between n + 1 nodes.
struct BeamModel {
    std::vector<double> node_positions;   ///< s_0 < s_1 < ... < s_n
    std::vector<SectionMaterial> sections; ///< one per element
    BeamTheory theory = BeamTheory::EulerBernoulli;
    std::vector<PointMass> point_masses;
    Boundary boundary = Boundary::ClampedAtNodeZero;

    std::size_t element_count() const noexcept { return sections.size(); }
    std::size_t node_count() const noexcept { return node_positions.size(); }
    double length() const { return node_positions.back() - node_positions.front(); }

    /// Length of element e (0-based, spanning nodes e and e + 1).
    double element_length(std::size_t e) const
    {
        return node_positions[e + 1] - node_positions[e];
    }

    /// n equal elements over [0, length], all with the same section.
    static BeamModel uniform(std::size_t elements, double length, const SectionMaterial& section,
                             BeamTheory theory = BeamTheory::EulerBernoulli,
                             Boundary boundary = Boundary::ClampedAtNodeZero)
    {
        if (elements == 0) throw InvalidInput("beam model needs at least one element");
        BeamModel m;
        m.node_positions.resize(elements + 1);
        for (std::size_t i = 0; i <= elements; ++i)
            m.node_positions[i] = length * static_cast<double>(i) / static_cast<double>(elements);
        m.sections.assign(elements, section);
        m.theory = theory;
        m.boundary = boundary;
        return m;
    }

    void validate() const
    {
        if (sections.empty()) throw InvalidInput("beam model needs at least one element");
        if (node_positions.size() != sections.size() + 1)
            throw InvalidInput("beam model: node count must be element count + 1");
        for (std::size_t e = 0; e < sections.size(); ++e) {
            if (!(element_length(e) > 0.0))
                throw InvalidInput("beam model: element " + std::to_string(e) +
                                   " has nonpositive length");
            sections[e].validate(theory);
        }
        for (const auto& pm : point_masses) {
            if (pm.node >= node_positions.size())
                throw InvalidInput("beam model: point mass on nonexistent node " +
                                   std::to_string(pm.node));
            if (!(pm.mass >= 0.0)) throw InvalidInput("beam model: negative point mass");
        }
    }
};

using Matrix4 = Eigen::Matrix4d;

/// Element matrices in DoF order (u1, psi1, u2, psi2).
struct ElementMatrices {
    Matrix4 stiffness;
    Matrix4 mass;
};

namespace detail {

inline void check_element_args(double length, double modulus)
{
    if (!(length > 0.0)) throw InvalidInput("element length must be > 0");
    if (!(modulus > 0.0)) throw InvalidInput("effective Young's modulus must be > 0");
}

} // namespace detail

/// Euler-Bernoulli cubic Hermite element with effective modulus `modulus`.
inline ElementMatrices eb_element_matrices(const SectionMaterial& sm, double length, double modulus)
{
    detail::check_element_args(length, modulus);
    const double l = length;
    const double l2 = l * l;
    ElementMatrices em;
    em.stiffness << 12, 6 * l, -12, 6 * l,
                    6 * l, 4 * l2, -6 * l, 2 * l2,
                    -12, -6 * l, 12, -6 * l,
                    6 * l, 2 * l2, -6 * l, 4 * l2;
    em.stiffness *= modulus * sm.area_moment / (l2 * l);
    em.mass << 156, 22 * l, 54, -13 * l,
               22 * l, 4 * l2, 13 * l, -3 * l2,
               54, 13 * l, 156, -22 * l,
               -13 * l, -3 * l2, -22 * l, 4 * l2;
    em.mass *= l * sm.linear_density() / 420.0;
    return em;
}

/// Shear parameter Phi = 12 E I / (kappa G A l^2). `modulus` may be zero.
inline double timoshenko_phi(const SectionMaterial& sm, double length, double modulus)
{
    const double denom = sm.shear_constant * sm.shear_modulus * sm.area * length * length;
    if (!(denom > 0.0)) throw InvalidInput("Timoshenko shear parameter: zero denominator");
    return 12.0 * modulus * sm.area_moment / denom;
}

/// Timoshenko element (reduced-integration, two DoF per node). The mass matrix
/// is the translational part plus the rotational-inertia part.
inline ElementMatrices timoshenko_element_matrices(const SectionMaterial& sm, double length,
                                                   double modulus)
{
    detail::check_element_args(length, modulus);
    const double phi = timoshenko_phi(sm, length, modulus);
    const double l = length;
    const double l2 = l * l;
    const double p2 = phi * phi;
    const double q = 1.0 + phi;

    ElementMatrices em;
    em.stiffness << 12, 6 * l, -12, 6 * l,
                    6 * l, l2 * (4 + phi), -6 * l, l2 * (2 - phi),
                    -12, -6 * l, 12, -6 * l,
                    6 * l, l2 * (2 - phi), -6 * l, l2 * (4 + phi);
    em.stiffness *= modulus * sm.area_moment / (q * l2 * l);

    const double m1 = 312 + 588 * phi + 280 * p2;
    const double m2 = (44 + 77 * phi + 35 * p2) * l;
    const double m3 = 108 + 252 * phi + 140 * p2;
    const double m4 = -(26 + 63 * phi + 35 * p2) * l;
    const double m5 = (8 + 14 * phi + 7 * p2) * l2;
    const double m6 = -(6 + 14 * phi + 7 * p2) * l2;
    const double m7 = 36;
    const double m8 = (3 - 15 * phi) * l;
    const double m9 = (4 + 5 * phi + 10 * p2) * l2;
    const double m10 = (-1 - 5 * phi + 5 * p2) * l2;

    Matrix4 translational;
    translational << m1, m2, m3, m4,
                     m2, m5, -m4, m6,
                     m3, -m4, m1, -m2,
                     m4, m6, -m2, m5;
    Matrix4 rotational;
    rotational << m7, m8, -m7, m8,
                  m8, m9, -m8, m10,
                  -m7, -m8, m7, -m8,
                  m8, m10, -m8, m9;
    em.mass = translational * (sm.linear_density() * l / (840.0 * q * q)) +
              rotational * (sm.density * sm.area_moment / (30.0 * q * q * l));
    return em;
}

/// Values of the four interpolation functions at xi in [0, l]. Phi = 0 gives
/// the Euler-Bernoulli cubics.
inline std::array<double, 4> shape_functions(BeamTheory theory, double phi, double length, double xi)
{
    if (!(length > 0.0)) throw InvalidInput("element length must be > 0");
    if (!(xi >= 0.0 && xi <= length)) throw InvalidInput("shape function position outside element");
    const double p = theory == BeamTheory::EulerBernoulli ? 0.0 : phi;
    const double r = xi / length;
    const double r2 = r * r;
    const double r3 = r2 * r;
    const double q = 1.0 + p;
    return {
        (1 + p - p * r - 3 * r2 + 2 * r3) / q,
        length * ((2 + p) / 2 * r - (4 + p) / 2 * r2 + r3) / q,
        (p * r + 3 * r2 - 2 * r3) / q,
        length * (-p / 2 * r - (2 - p) / 2 * r2 + r3) / q,
    };
}

/// Global system in DoF order (u_0, psi_0, u_1, psi_1, ...); node 0 removed when clamped.
struct AssembledSystem {
    BandedSymmetric stiffness;
    BandedSymmetric mass;
    /// Row of node i's translational DoF, or -1 if the node is clamped.
    std::vector<long> node_row;

    std::size_t dim() const noexcept { return stiffness.dim(); }
};

/// Builds K(theta) and M(theta) with E_e = theta_e * E0_e.
inline AssembledSystem assemble(const BeamModel& model, std::span<const double> theta)
{
    model.validate();
    const std::size_t n = model.element_count();
    if (theta.size() != n)
        throw InvalidInput("assemble: theta has " + std::to_string(theta.size()) +
                           " entries, model has " + std::to_string(n) + " elements");
    for (std::size_t e = 0; e < n; ++e)
        if (!(theta[e] > 0.0))
            throw InvalidInput("assemble: theta[" + std::to_string(e) + "] must be > 0");

    const bool clamped = model.boundary == Boundary::ClampedAtNodeZero;
    const std::size_t skip = clamped ? 2 : 0;
    const std::size_t dim = 2 * (n + 1) - skip;

    AssembledSystem sys;
    sys.stiffness = BandedSymmetric(dim, 3);
    sys.mass = BandedSymmetric(dim, 3);
    sys.node_row.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        sys.node_row[i] = (clamped && i == 0) ? -1 : static_cast<long>(2 * i - skip);

    for (std::size_t e = 0; e < n; ++e) {
        const auto& sm = model.sections[e];
        const double modulus = theta[e] * sm.youngs_modulus;
        const ElementMatrices em = model.theory == BeamTheory::EulerBernoulli
                                       ? eb_element_matrices(sm, model.element_length(e), modulus)
                                       : timoshenko_element_matrices(sm, model.element_length(e), modulus);
        const std::size_t first = 2 * e;
        for (std::size_t a = 0; a < 4; ++a) {
            if (first + a < skip) continue;
            for (std::size_t b = 0; b <= a; ++b) {
                if (first + b < skip) continue;
                const std::size_t ra = first + a - skip;
                const std::size_t rb = first + b - skip;
                const auto ia = static_cast<Eigen::Index>(a);
                const auto ib = static_cast<Eigen::Index>(b);
                sys.stiffness.add(ra, rb, em.stiffness(ia, ib));
                sys.mass.add(ra, rb, em.mass(ia, ib));
            }
        }
    }
    for (const auto& pm : model.point_masses) {
        const long row = sys.node_row[pm.node];
        if (row >= 0) sys.mass.add(static_cast<std::size_t>(row), static_cast<std::size_t>(row), pm.mass);
    }
    return sys;
}

} // namespace mogpsa
