// Acceptance checks: one PASS/FAIL line per criterion.
//
// Usage: mogpsa_acceptance [--expect-red 4,6,...] [--only 1,2,...] [--work DIR]
// Exit status is 0 when every failing criterion is listed in --expect-red.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mogpsa.hpp"

using namespace mogpsa;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------- oracles

// Written from the definitions, independent of the library's dominance code.
bool oracle_dominates(const ImagePoint& a, const ImagePoint& b)
{
    if (a.is_infeasible()) return false;
    if (b.is_infeasible()) return true;
    const auto x = a.values(), y = b.values();
    bool strict = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > y[i]) return false;
        if (x[i] < y[i]) strict = true;
    }
    return strict;
}

bool same_image(const ImagePoint& a, const ImagePoint& b)
{
    if (a.is_infeasible() || b.is_infeasible()) return a.is_infeasible() == b.is_infeasible();
    return std::ranges::equal(a.values(), b.values());
}

// First occurrence of each distinct image among `pool` that nothing in `pool` dominates.
std::vector<std::size_t> oracle_nd(const std::vector<ImagePoint>& pts, const std::vector<std::size_t>& pool)
{
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < pool.size(); ++a) {
        const auto& p = pts[pool[a]];
        bool keep = true;
        for (std::size_t b = 0; b < pool.size() && keep; ++b) {
            if (b == a) continue;
            const auto& q = pts[pool[b]];
            if (same_image(p, q) ? pool[b] < pool[a] : oracle_dominates(q, p)) keep = false;
        }
        if (keep) out.push_back(pool[a]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::size_t>> oracle_peel(const std::vector<ImagePoint>& pts)
{
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool first = true;
        for (std::size_t j = 0; j < i && first; ++j) first = !same_image(pts[i], pts[j]);
        if (first) pool.push_back(i);
    }
    std::vector<std::vector<std::size_t>> levels;
    while (!pool.empty()) {
        auto front = oracle_nd(pts, pool);
        std::vector<std::size_t> rest;
        std::set_difference(pool.begin(), pool.end(), front.begin(), front.end(), std::back_inserter(rest));
        levels.push_back(std::move(front));
        pool = std::move(rest);
    }
    return levels;
}

struct Instance {
    std::vector<ImagePoint> points;
    std::vector<double> lambda;
};

// Mixed generator: continuous, coarse-integer (ties, duplicates) and
// anti-correlated clouds, with a random share of Infeasible entries.
Instance random_instance(std::mt19937_64& rng, std::size_t max_size)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto size = static_cast<std::size_t>(std::floor(std::exp(u(rng) * std::log(double(max_size))))) ;
    const std::size_t m = u(rng) < 0.5 ? 2 : 3;
    const int kind = static_cast<int>(u(rng) * 3);
    const double infeasible_share = u(rng) < 0.3 ? 0.0 : 0.15 * u(rng);
    const int grid = 2 + static_cast<int>(u(rng) * 12);
    Instance inst;
    for (std::size_t i = 0; i < std::max<std::size_t>(size, 1); ++i) {
        if (u(rng) < infeasible_share) {
            inst.points.push_back(ImagePoint::infeasible());
            continue;
        }
        std::vector<double> v(m);
        for (auto& c : v) c = u(rng);
        if (kind == 1)
            for (auto& c : v) c = std::floor(c * grid);
        if (kind == 2) {
            double s = 0.0;
            for (auto c : v) s += c;
            for (auto& c : v) c = c / s + 0.01 * u(rng);
        }
        inst.points.push_back(ImagePoint::finite(v));
    }
    if (u(rng) < 0.5) {
        inst.lambda.assign(m, 1.0);
    } else {
        for (std::size_t j = 0; j < m; ++j) inst.lambda.push_back(0.2 + 3.0 * u(rng));
    }
    return inst;
}

// ---------------------------------------------------------------- twin runs

constexpr double element_length = 0.005;
const DamageParams twin_truth{0.04, 75 * element_length, 6 * element_length};

RunConfig twin_config(const fs::path& out, NoiseSpec noise = {})
{
    RunConfig c;
    c.uniform_sensors = 15;
    c.modes = 5;
    c.hall_of_fame = 50;
    c.resolution = 20;
    c.budget = 1000;
    c.threads = 1;
    c.twin = TwinScenario{twin_truth, noise};
    c.output_dir = out.string();
    return c;
}

// ---------------------------------------------------------------- criteria

Outcome sorting_exactness()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t mismatches = 0, instances = 10000, total = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto inst = random_instance(rng, 2000);
        auto fast = presort_gyrm(inst.points, inst.lambda);
        std::sort(fast.begin(), fast.end());
        std::vector<std::size_t> all(inst.points.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (fast != oracle_nd(inst.points, all)) ++mismatches;
        total += inst.points.size();
    }
    const double t = seconds_since(t0);
    return {mismatches == 0 && t < 60.0,
            fmt("%zu instances (%zu points), %zu mismatches, %.1f s (limit 60 s)", instances, total, mismatches, t)};
}

Outcome level_fronts()
{
    std::mt19937_64 rng(77);
    std::size_t mismatches = 0, instances = 1000, levels = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto inst = random_instance(rng, 300);
        auto fronts = pareto_fronts(inst.points, inst.lambda, all_levels);
        for (auto& f : fronts) std::sort(f.begin(), f.end());
        const auto expected = oracle_peel(inst.points);
        if (fronts != expected) ++mismatches;
        levels += expected.size();
    }
    return {mismatches == 0, fmt("%zu instances, %zu levels, %zu mismatches", instances, levels, mismatches)};
}

double fitted_exponent(const std::vector<double>& n, const std::vector<double>& t)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n.size(); ++i) mx += std::log(n[i]), my += std::log(t[i]);
    mx /= double(n.size());
    my /= double(n.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        sxy += (std::log(n[i]) - mx) * (std::log(t[i]) - my);
        sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
    }
    return sxy / sxx;
}

Outcome output_sensitive_scaling()
{
    std::string detail;
    bool pass = true;
    for (std::size_t m : {2u, 3u}) {
        std::vector<double> sizes, times;
        std::size_t front_size = 0;
        for (std::size_t n : {1000u, 10000u, 100000u}) {
            std::mt19937_64 rng(n + m);
            std::uniform_real_distribution<double> u(20.0, 1000.0);
            std::vector<ImagePoint> pts;
            // Ten mutually non-dominated points that dominate the whole cloud.
            for (std::size_t i = 0; i < 10; ++i) {
                std::vector<double> v(m, 10.0);
                v[0] = double(i);
                v[1] = double(9 - i);
                pts.push_back(ImagePoint::finite(v));
            }
            while (pts.size() < n) {
                std::vector<double> v(m);
                for (auto& c : v) c = u(rng);
                pts.push_back(ImagePoint::finite(v));
            }
            std::shuffle(pts.begin(), pts.end(), rng);
            const std::vector<double> lambda(m, 1.0);
            double best = 1e300;
            std::size_t reps = 0;
            const auto start = Clock::now();
            while (reps < 5 || (seconds_since(start) < 0.5 && reps < 200)) {
                const auto t0 = Clock::now();
                front_size = presort_gyrm(pts, lambda).size();
                best = std::min(best, seconds_since(t0));
                ++reps;
            }
            sizes.push_back(double(n));
            times.push_back(best);
        }
        const double p = fitted_exponent(sizes, times);
        pass = pass && p <= 1.3 && front_size <= 10;
        detail += fmt("m=%zu: |B|=%zu, t=%.2e/%.2e/%.2e s, exponent %.3f; ", m, front_size, times[0], times[1],
                      times[2], p);
    }
    detail += "limit 1.3";
    return {pass, detail};
}

Outcome eigensolver_accuracy()
{
    const auto t0 = Clock::now();
    const std::size_t n = 100;
    auto s = SectionMaterial::rectangular(210e9, 7850.0, 0.05, 0.01);
    const auto model = BeamModel::uniform(n, 2.0, s);
    const std::vector<double> ones(n, 1.0);
    const auto sys = assemble(model, ones);
    const auto eig = solve_generalized_eig(sys, 3);
    const double beta[] = {1.875104, 4.694091, 7.854757};
    const double L = model.length();
    const double c = std::sqrt(s.youngs_modulus * s.area_moment / (s.density * s.area));

    const auto K = sys.stiffness.to_dense();
    const auto M = sys.mass.to_dense();
    const double norm_k = K.cwiseAbs().colwise().sum().maxCoeff();
    const double norm_m = M.cwiseAbs().colwise().sum().maxCoeff();
    double worst_freq = 0, worst_res = 0, worst_backward = 0;
    std::string per_mode;
    for (int k = 0; k < 3; ++k) {
        const double f = std::sqrt(eig.values[k]) / (2 * std::numbers::pi);
        const double fa = beta[k] * beta[k] / (2 * std::numbers::pi * L * L) * c;
        worst_freq = std::max(worst_freq, std::abs(f - fa) / fa);
        // Residual accumulated in extended precision so only the computed pair is judged.
        const auto u = eig.vectors.col(k);
        long double r2 = 0, ku2 = 0, u1 = 0;
        for (Eigen::Index i = 0; i < K.rows(); ++i) {
            long double ku = 0, mu = 0;
            for (Eigen::Index j = 0; j < K.cols(); ++j) {
                ku += (long double)K(i, j) * u[j];
                mu += (long double)M(i, j) * u[j];
            }
            const long double r = ku - (long double)eig.values[k] * mu;
            r2 += r * r;
            ku2 += ku * ku;
            u1 += std::abs((long double)u[i]);
        }
        const double res = double(std::sqrt(r2 / ku2));
        const double backward =
            double(std::sqrt(r2)) / ((norm_k + std::abs(eig.values[k]) * norm_m) * double(u1));
        worst_res = std::max(worst_res, res);
        worst_backward = std::max(worst_backward, backward);
        per_mode += fmt("%s%.1e", k ? "/" : "", res);
    }
    const double t = seconds_since(t0);
    return {worst_freq <= 1e-3 && worst_res <= 1e-8 && t < 5.0,
            fmt("max freq error %.2e (limit 1e-3); residual ||Ku-lMu||/||Ku|| %s (limit 1e-8); backward error %.1e; "
                "%.2f s",
                worst_freq, per_mode.c_str(), worst_backward, t)};
}

Outcome analytic_front()
{
    const auto t0 = Clock::now();
    const GridSpec spec{{-1.0}, {2.0}, 20};
    SearchOptions opts;
    opts.hall_of_fame = 10;
    const auto r = optimize(
        [](std::span<const double> x) { return ImagePoint::finite({x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)}); },
        spec, opts);
    const double t = seconds_since(t0);
    const double step = 3.0 / double(spec.extent());

    bool in_range = true;
    for (const auto& p : r.parameters)
        if (p[0] < -3 * step || p[0] > 1 + 3 * step) in_range = false;

    std::vector<std::pair<double, double>> img;
    for (const auto& q : r.images) img.emplace_back(q[0], q[1]);
    std::sort(img.begin(), img.end());
    bool nondominated = !img.empty();
    for (std::size_t i = 1; i < img.size(); ++i)
        if (!(img[i].first > img[i - 1].first && img[i].second < img[i - 1].second)) nondominated = false;

    // For each reference point, the smallest image-space slack at which some
    // returned point weakly dominates it.
    std::size_t touched = 0;
    double needed = 0;
    for (int k = 0; k < 50; ++k) {
        const double s = k / 49.0;
        const double p0 = s * s, p1 = (s - 1) * (s - 1);
        double gap = 1e300;
        for (const auto& [a, b] : img) gap = std::min(gap, std::max({a - p0, b - p1, 0.0}));
        needed = std::max(needed, gap);
        if (gap <= 6 * step) ++touched;
    }
    return {in_range && nondominated && touched == 50 && t < 5.0,
            fmt("%zu points, params within [0,1]+-3 steps: %s, mutually non-dominated: %s, %zu/50 reference "
                "points touched (worst gap %.2f grid steps, tolerance 6), %.2f s",
                r.images.size(), in_range ? "yes" : "no", nondominated ? "yes" : "no", touched, needed / step, t)};
}

const FrontRow* row_with(const ExperimentReport& rep, auto better)
{
    const FrontRow* best = nullptr;
    for (const auto& row : rep.front)
        if (!best || better(row, *best)) best = &row;
    return best;
}

Outcome twin_location(const ExperimentReport& rep)
{
    const double mu_true = twin_truth.center, d_true = twin_truth.severity;
    bool found = false;
    for (const auto& row : rep.front)
        if (row.eps_f <= 1e-6 && row.eps_m <= 1e-6 && std::abs(row.x.center - mu_true) <= 2 * element_length &&
            std::abs(row.x.severity - d_true) <= 0.005)
            found = true;
    const auto* best = row_with(rep, [](const FrontRow& a, const FrontRow& b) {
        return std::hypot(a.eps_f, a.eps_m) < std::hypot(b.eps_f, b.eps_m);
    });
    std::string d = fmt("%zu front points, %zu evaluations, %.1f s", rep.front.size(), rep.evaluations, rep.seconds);
    if (best)
        d += fmt("; closest: eps_f %.2e eps_m %.2e D %.5f mu %.2f el sigma %.2f el (limits 1e-6, 1e-6, +-0.005, "
                 "+-2 el)",
                 best->eps_f, best->eps_m, best->x.severity, best->x.center / element_length,
                 best->x.extent / element_length);
    if (!rep.search.trace.empty()) {
        const auto& w = rep.search.final_steps;
        d += fmt("; final steps (%lld, %lld, %lld)%s", (long long)w[0], (long long)w[1], (long long)w[2],
                 rep.search.budget_exhausted ? ", budget exhausted" : "");
    }
    return {found && rep.seconds < 600.0, d};
}

Outcome noise_robustness(const fs::path& work)
{
    bool pass = true;
    std::string d;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rep = run_experiment(twin_config(work / fmt("noise_%llu", (unsigned long long)seed),
                                                    NoiseSpec{0.001, 0.01, seed}));
        // Best-located: the front point whose centre lies nearest the truth.
        const auto* best = row_with(rep, [](const FrontRow& a, const FrontRow& b) {
            return std::abs(a.x.center - twin_truth.center) < std::abs(b.x.center - twin_truth.center);
        });
        const double off = best ? std::abs(best->x.center - twin_truth.center) / element_length : 1e300;
        pass = pass && off <= 5.0;
        d += fmt("%sseed %llu: %.2f el", seed > 1 ? ", " : "", (unsigned long long)seed, off);
    }
    return {pass, d + " (limit 5 el)"};
}

Outcome barrier_counters(const ExperimentReport& rep)
{
    // Every evaluation either hit the barrier or ran exactly one modal solve;
    // the Infeasible outcomes are the barrier hits plus solver failures.
    const bool split = rep.barrier + rep.solver_calls == rep.evaluations;
    const bool infeasible = rep.search.infeasible == rep.barrier + rep.failures;
    // The trace carries running totals.
    std::size_t trace_infeasible = 0;
    bool trace = true;
    for (const auto& it : rep.search.trace) {
        trace = trace && it.infeasible >= trace_infeasible;
        trace_infeasible = it.infeasible;
    }
    trace = trace && trace_infeasible == rep.search.infeasible;
    return {split && infeasible && trace && rep.evaluations == rep.search.unique_evaluations,
            fmt("%zu evaluations = %zu barrier + %zu eigensolves; %zu Infeasible (%zu solver failures); trace total "
                "%zu",
                rep.evaluations, rep.barrier, rep.solver_calls, rep.search.infeasible, rep.failures,
                trace_infeasible)};
}

Outcome cancellation()
{
    const auto model = make_cantilever_model();
    const auto layout = SensorLayout::uniform(model.element_count(), 15);
    const DamageBox box{0.3, model.length(), 0.15};
    auto [m0, m1] = make_synthetic_measurement(model, layout, 5, twin_truth, box);
    const auto st = UpdatingStates::create(model, layout, 5, m0, m1);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    std::size_t states = 0;
    while (states < 100) {
        const DamageParams x{0.3 * u(rng), model.length() * u(rng), 0.05 + 0.5 * u(rng)};
        const auto th = theta(model.node_positions, x);
        if (!constraints(th, 0.15).feasible) continue;
        const auto s1 = modal_analysis(model, th, layout, 5, &st.simulated_healthy);
        auto scaled = st;
        for (std::size_t k = 0; k < 5; ++k) {
            const double c = 0.5 + u(rng);
            scaled.measured_healthy.frequencies[k] *= c;
            scaled.measured_damaged.frequencies[k] *= c;
        }
        worst = std::max(worst, std::abs(eps_f(scaled, s1) - eps_f(st, s1)));
        ++states;
    }
    return {worst <= 1e-12, fmt("%zu states, max |d eps_f| %.2e (limit 1e-12)", states, worst)};
}

Outcome determinism(const fs::path& first, const fs::path& work)
{
    const auto second = work / "twin_repeat";
    run_experiment(twin_config(second));
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const auto a = slurp(first / "front.csv"), b = slurp(second / "front.csv");
    return {!a.empty() && a == b, fmt("front.csv %zu bytes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

std::set<int> parse_list(const std::string& s)
{
    std::set<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.insert(std::stoi(tok));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app("acceptance checks");
    std::string expect_red, only;
    std::string work = (fs::temp_directory_path() / "mogpsa_acceptance").string();
    app.add_option("--expect-red", expect_red, "criteria known to fail, comma separated");
    app.add_option("--only", only, "run a subset, comma separated");
    app.add_option("--work", work, "scratch directory for run outputs");
    CLI11_PARSE(app, argc, argv);
    const auto red = parse_list(expect_red);
    auto selected = parse_list(only);
    if (selected.empty())
        for (int i = 1; i <= 10; ++i) selected.insert(i);

    fs::remove_all(work);
    fs::create_directories(work);

    std::optional<ExperimentReport> twin;
    const fs::path twin_dir = fs::path(work) / "twin";
    auto twin_report = [&]() -> const ExperimentReport& {
        if (!twin) twin = run_experiment(twin_config(twin_dir));
        return *twin;
    };

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"sorting exactness", sorting_exactness},
        {"level fronts", level_fronts},
        {"output-sensitive scaling", output_sensitive_scaling},
        {"eigensolver accuracy", eigensolver_accuracy},
        {"analytic front", analytic_front},
        {"twin damage location", [&] { return twin_location(twin_report()); }},
        {"noise robustness", [&] { return noise_robustness(work); }},
        {"barrier short-circuit", [&] { return barrier_counters(twin_report()); }},
        {"order-0 cancellation", cancellation},
        {"determinism", [&] { twin_report(); return determinism(twin_dir, work); }},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = int(i) + 1;
        if (!selected.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const char* note = o.pass ? (red.count(id) ? " [listed as expected red]" : "")
                                  : (red.count(id) ? " [expected red]" : "");
        std::cout << "criterion " << id << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << note
                  << " - " << o.detail << std::endl;
        if (!o.pass && !red.count(id)) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
