#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mogpsa/beam_fe.hpp"
#include "mogpsa/damage.hpp"
#include "mogpsa/errors.hpp"
#include "mogpsa/image_point.hpp"
#include "mogpsa/log.hpp"
#include "mogpsa/modal.hpp"

namespace mogpsa {

/// The four model-updating states: measured/simulated x healthy/damaged.
/// M0, M1 and S0 are fixed; S1 is recomputed for every candidate damage.
struct UpdatingStates {
    BeamModel model;
    SensorLayout layout;
    std::size_t modes = 0;
    ModalResult measured_healthy;  ///< M0
    ModalResult measured_damaged;  ///< M1, sign-aligned to M0
    ModalResult simulated_healthy; ///< S0, theta = 1

    /// Computes S0 and aligns M1's shapes to M0. M0/M1 must carry `modes` modes
    /// on `layout.size()` sensors, listed in the same physical mode order.
    static UpdatingStates create(BeamModel model, SensorLayout layout, std::size_t modes, ModalResult m0,
                                 ModalResult m1)
    {
        model.validate();
        UpdatingStates st;
        st.modes = modes;
        for (const auto* r : {&m0, &m1}) {
            if (r->mode_count() != modes)
                throw InvalidInput("measured state has " + std::to_string(r->mode_count()) + " modes, expected " +
                                   std::to_string(modes));
            if (r->sensor_count() != layout.size())
                throw InvalidInput("measured state has " + std::to_string(r->sensor_count()) +
                                   " sensors, layout has " + std::to_string(layout.size()));
        }
        const std::vector<double> healthy(model.element_count(), 1.0);
        st.simulated_healthy = modal_analysis(model, healthy, layout, modes);
        for (std::size_t k = 0; k < modes; ++k)
            m1.mode_shapes[k] = align_sign(m1.mode_shapes[k], m0.mode_shapes[k]);
        st.model = std::move(model);
        st.layout = std::move(layout);
        st.measured_healthy = std::move(m0);
        st.measured_damaged = std::move(m1);
        return st;
    }
};

/// Frequency error: root of the summed squared differences of relative frequency shifts.
inline double eps_f(const UpdatingStates& st, const ModalResult& s1)
{
    const auto& s0 = st.simulated_healthy;
    const auto& m0 = st.measured_healthy;
    const auto& m1 = st.measured_damaged;
    if (s1.mode_count() != st.modes) throw InvalidInput("eps_f: simulated state has the wrong mode count");
    double sum = 0.0;
    for (std::size_t k = 0; k < st.modes; ++k) {
        if (s0.frequencies[k] == 0.0 || m0.frequencies[k] == 0.0)
            throw DegenerateReference("healthy frequency of mode " + std::to_string(k + 1) + " is zero");
        const double sim = (s1.frequencies[k] - s0.frequencies[k]) / s0.frequencies[k];
        const double meas = (m1.frequencies[k] - m0.frequencies[k]) / m0.frequencies[k];
        sum += (sim - meas) * (sim - meas);
    }
    return std::sqrt(sum);
}

/// Mode-shape error: root of the summed squared norms of shape-change differences.
inline double eps_m(const UpdatingStates& st, const ModalResult& s1)
{
    const auto& s0 = st.simulated_healthy;
    const auto& m0 = st.measured_healthy;
    const auto& m1 = st.measured_damaged;
    if (s1.mode_count() != st.modes) throw InvalidInput("eps_m: simulated state has the wrong mode count");
    double sum = 0.0;
    for (std::size_t k = 0; k < st.modes; ++k) {
        const auto s1k = align_sign(s1.mode_shapes[k], s0.mode_shapes[k]);
        const std::size_t m = s0.mode_shapes[k].size();
        if (s1k.size() != m || m0.mode_shapes[k].size() != m || m1.mode_shapes[k].size() != m)
            throw InvalidInput("eps_m: mode shape dimensions differ");
        for (std::size_t i = 0; i < m; ++i) {
            const double d = (s1k[i] - s0.mode_shapes[k][i]) - (m1.mode_shapes[k][i] - m0.mode_shapes[k][i]);
            sum += d * d;
        }
    }
    return std::sqrt(sum);
}

/// Counters of a DamageObjective; all updates are atomic.
struct ObjectiveCounters {
    std::atomic<std::size_t> evaluations{0};
    std::atomic<std::size_t> barrier{0};      ///< infeasible, rejected before any eigensolve
    std::atomic<std::size_t> solver_calls{0};
    std::atomic<std::size_t> failures{0};     ///< eigensolver errors mapped to Infeasible
};

/// Bi-objective (eps_f, eps_m) of a damage candidate with the extreme barrier.
/// Safe to call concurrently; the states are shared read-only.
class DamageObjective {
public:
    DamageObjective(const UpdatingStates& states, DamageBox box) : states_(&states), box_(box)
    {
        box_.validate();
    }

    ImagePoint evaluate(const DamageParams& x) const
    {
        ++counters_.evaluations;
        const auto th = theta(states_->model.node_positions, x);
        if (!constraints(th, box_.theta_min).feasible) {
            ++counters_.barrier;
            return ImagePoint::infeasible();
        }
        ++counters_.solver_calls;
        try {
            const auto s1 = modal_analysis(states_->model, th, states_->layout, states_->modes,
                                           &states_->simulated_healthy);
            return ImagePoint::finite({eps_f(*states_, s1), eps_m(*states_, s1)});
        } catch (const Error& e) {
            ++counters_.failures;
            warn(std::string("evaluation failed at D=") + std::to_string(x.severity) +
                 " mu=" + std::to_string(x.center) + " sigma=" + std::to_string(x.extent) + ": " + e.what());
            return ImagePoint::infeasible();
        }
    }

    /// Search-space adapter: x = (D, mu, sigma).
    ImagePoint operator()(std::span<const double> x) const
    {
        if (x.size() != 3) throw InvalidInput("damage objective expects (D, mu, sigma)");
        return evaluate({x[0], x[1], x[2]});
    }

    const ObjectiveCounters& counters() const noexcept { return counters_; }
    const UpdatingStates& states() const noexcept { return *states_; }
    const DamageBox& box() const noexcept { return box_; }

    /// Lower/upper corners of the search box in (D, mu, sigma) order.
    std::pair<std::vector<double>, std::vector<double>> bounds() const
    {
        return {{0.0, 0.0, 0.0}, {box_.max_severity, box_.length, box_.length}};
    }

private:
    const UpdatingStates* states_;
    DamageBox box_;
    mutable ObjectiveCounters counters_;
};

/// Noise on synthetic measurements. Frequencies get f (1 + frequency * N(0,1));
/// shape entries get shape / sqrt(m) * N(0,1) (relative to the RMS entry of a
/// unit vector) followed by renormalization.
struct NoiseSpec {
    double frequency = 0.0;
    double shape = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void add_noise(ModalResult& r, const NoiseSpec& noise, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < r.mode_count(); ++k) {
        if (noise.frequency > 0.0) {
            r.frequencies[k] *= 1.0 + noise.frequency * normal(rng);
            const double omega = 2.0 * std::numbers::pi * r.frequencies[k];
            r.eigenvalues[k] = omega * omega;
        }
        if (noise.shape > 0.0) {
            auto& phi = r.mode_shapes[k];
            const double scale = noise.shape / std::sqrt(static_cast<double>(phi.size()));
            for (auto& v : phi) v += scale * normal(rng);
            std::vector<std::size_t> all(phi.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            phi = gather_normalize(phi, all);
        }
    }
}

} // namespace detail

/// Synthetic (M0, M1) generated by the simulator itself with damage x_true.
/// Without noise M0 equals S0 bit for bit.
inline std::pair<ModalResult, ModalResult> make_synthetic_measurement(const BeamModel& model,
                                                                      const SensorLayout& layout,
                                                                      std::size_t modes,
                                                                      const DamageParams& x_true,
                                                                      const DamageBox& box,
                                                                      const NoiseSpec& noise = {})
{
    box.validate();
    if (!box.contains(x_true)) throw InvalidInput("true damage lies outside the search box");
    const auto th = theta(model.node_positions, x_true);
    if (!constraints(th, box.theta_min).feasible)
        throw InvalidInput("true damage violates the stiffness floor theta_min");
    if (!(noise.frequency >= 0.0 && noise.shape >= 0.0)) throw InvalidInput("noise levels must be >= 0");

    const std::vector<double> healthy(model.element_count(), 1.0);
    ModalResult m0 = modal_analysis(model, healthy, layout, modes);
    ModalResult m1 = modal_analysis(model, th, layout, modes, &m0);
    if (noise.frequency > 0.0 || noise.shape > 0.0) {
        std::mt19937_64 rng(noise.seed);
        detail::add_noise(m0, noise, rng);
        detail::add_noise(m1, noise, rng);
    }
    return {std::move(m0), std::move(m1)};
}

} // namespace mogpsa
