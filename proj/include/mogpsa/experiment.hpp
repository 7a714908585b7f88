#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mogpsa/csv.hpp"
#include "mogpsa/damage.hpp"
#include "mogpsa/errors.hpp"
#include "mogpsa/model_io.hpp"
#include "mogpsa/objective.hpp"
#include "mogpsa/search.hpp"

// Configuration-driven damage-location runs.
//
// A run config is a JSON object:
//
//   {
//     "model": "beam.json",                 model file; omit to use the built-in cantilever
//     "cantilever_layout": "layout.json",   optional layout for the built-in cantilever
//     "theory": "euler_bernoulli",          optional override of the model's theory
//     "sensors": {"uniform": 15} | {"nodes": [..]},
//     "modes": 5,
//     "damage_box": {"max_severity": 0.3, "theta_min": 0.15, "length": 1.205},
//     "search": {"T": 50, "N": 20, "budget": 1000, "weights": [1, 1], "threads": 1},
//     "twin": {"severity": .., "center": .., "extent": .., "frequency_noise": 0, "shape_noise": 0, "seed": 0}
//       or "measured": {"healthy": "m0.csv", "damaged": "m1.csv"},
//     "output_dir": "out"
//   }
//
// Relative paths resolve against the config file's directory.

namespace mogpsa {

struct TwinScenario {
    DamageParams truth;
    NoiseSpec noise;
};

struct MeasuredData {
    std::string healthy_csv;
    std::string damaged_csv;
};

struct RunConfig {
    std::string model_path;             ///< empty: built-in cantilever
    std::string cantilever_layout_path; ///< optional, built-in cantilever only
    std::optional<BeamTheory> theory;
    std::optional<std::size_t> uniform_sensors;
    std::vector<std::size_t> sensor_nodes;
    std::size_t modes = 5;
    double max_severity = 0.3;
    double theta_min = 0.15;
    std::optional<double> length;
    std::size_t hall_of_fame = 50;
    int resolution = 20;
    std::size_t budget = 1000;
    std::vector<double> weights;
    unsigned threads = 1;
    std::optional<TwinScenario> twin;
    std::optional<MeasuredData> measured;
    std::string output_dir = "out";
};

namespace detail {

inline std::string resolve_path(const std::string& base_dir, const std::string& p)
{
    if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).string();
}

/// Reads optional fields while recording every problem instead of stopping at the first.
class ConfigReader {
public:
    explicit ConfigReader(std::vector<std::string>& errors) : errors_(errors) {}

    void keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
    {
        if (!j.is_object()) {
            errors_.push_back(where + ": expected an object");
            return;
        }
        for (const auto& [key, value] : j.items())
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
                allowed.end())
                errors_.push_back(where + ": unknown key '" + key + "'");
    }

    template <class T>
    void get(const json& j, const char* key, T& out, const std::string& where)
    {
        if (!j.is_object() || !j.contains(key)) return;
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            errors_.push_back(where + "." + key + ": wrong type");
        }
    }

    void fail(std::string msg) { errors_.push_back(std::move(msg)); }

private:
    std::vector<std::string>& errors_;
};

} // namespace detail

/// Parses and validates a run config; throws ConfigError listing every violation.
inline RunConfig parse_run_config(const json& j, const std::string& base_dir = {})
{
    std::vector<std::string> errors;
    detail::ConfigReader r(errors);
    RunConfig c;
    r.keys(j, {"model", "cantilever_layout", "theory", "sensors", "modes", "damage_box", "search", "twin",
               "measured", "output_dir"},
           "config");
    if (!j.is_object()) throw ConfigError(errors);

    r.get(j, "model", c.model_path, "config");
    r.get(j, "cantilever_layout", c.cantilever_layout_path, "config");
    if (!c.model_path.empty() && !c.cantilever_layout_path.empty())
        r.fail("config: 'model' and 'cantilever_layout' are mutually exclusive");
    c.model_path = detail::resolve_path(base_dir, c.model_path);
    c.cantilever_layout_path = detail::resolve_path(base_dir, c.cantilever_layout_path);

    if (j.contains("theory")) {
        std::string t;
        r.get(j, "theory", t, "config");
        if (t == "euler_bernoulli")
            c.theory = BeamTheory::EulerBernoulli;
        else if (t == "timoshenko")
            c.theory = BeamTheory::Timoshenko;
        else
            r.fail("config.theory: expected 'euler_bernoulli' or 'timoshenko'");
    }

    if (j.contains("sensors")) {
        const auto& s = j.at("sensors");
        r.keys(s, {"uniform", "nodes"}, "config.sensors");
        if (s.is_object() && s.contains("uniform") == s.contains("nodes"))
            r.fail("config.sensors: give exactly one of 'uniform' or 'nodes'");
        std::size_t count = 0;
        r.get(s, "uniform", count, "config.sensors");
        if (s.is_object() && s.contains("uniform")) {
            if (count == 0) r.fail("config.sensors.uniform: must be >= 1");
            c.uniform_sensors = count;
        }
        r.get(s, "nodes", c.sensor_nodes, "config.sensors");
    } else {
        c.uniform_sensors = 15;
    }

    r.get(j, "modes", c.modes, "config");
    if (c.modes < 1) r.fail("config.modes: must be >= 1");

    if (j.contains("damage_box")) {
        const auto& b = j.at("damage_box");
        r.keys(b, {"max_severity", "theta_min", "length"}, "config.damage_box");
        r.get(b, "max_severity", c.max_severity, "config.damage_box");
        r.get(b, "theta_min", c.theta_min, "config.damage_box");
        if (b.is_object() && b.contains("length")) {
            double len = 0.0;
            r.get(b, "length", len, "config.damage_box");
            if (!(len > 0.0)) r.fail("config.damage_box.length: must be > 0");
            c.length = len;
        }
    }
    if (!(c.max_severity > 0.0 && c.max_severity <= 1.0))
        r.fail("config.damage_box.max_severity: must lie in (0, 1]");
    if (!(c.theta_min > 0.0 && c.theta_min < 1.0)) r.fail("config.damage_box.theta_min: must lie in (0, 1)");

    if (j.contains("search")) {
        const auto& s = j.at("search");
        r.keys(s, {"T", "N", "budget", "weights", "threads"}, "config.search");
        r.get(s, "T", c.hall_of_fame, "config.search");
        r.get(s, "N", c.resolution, "config.search");
        r.get(s, "budget", c.budget, "config.search");
        r.get(s, "weights", c.weights, "config.search");
        r.get(s, "threads", c.threads, "config.search");
    }
    if (c.hall_of_fame < 1) r.fail("config.search.T: must be >= 1");
    if (c.resolution < 1 || c.resolution > 52) r.fail("config.search.N: must lie in [1, 52]");
    if (c.budget < 1) r.fail("config.search.budget: must be >= 1");
    if (!c.weights.empty()) {
        if (c.weights.size() != 2) r.fail("config.search.weights: need two entries (eps_f, eps_m)");
        for (double w : c.weights)
            if (!(w > 0.0)) r.fail("config.search.weights: entries must be > 0");
    }
    if (c.threads < 1) r.fail("config.search.threads: must be >= 1");

    if (j.contains("twin") == j.contains("measured"))
        r.fail("config: give exactly one of 'twin' or 'measured'");
    if (j.contains("twin")) {
        const auto& t = j.at("twin");
        r.keys(t, {"severity", "center", "extent", "frequency_noise", "shape_noise", "seed"}, "config.twin");
        TwinScenario tw;
        if (!t.is_object() || !t.contains("severity") || !t.contains("center") || !t.contains("extent"))
            r.fail("config.twin: severity, center and extent are required");
        r.get(t, "severity", tw.truth.severity, "config.twin");
        r.get(t, "center", tw.truth.center, "config.twin");
        r.get(t, "extent", tw.truth.extent, "config.twin");
        r.get(t, "frequency_noise", tw.noise.frequency, "config.twin");
        r.get(t, "shape_noise", tw.noise.shape, "config.twin");
        r.get(t, "seed", tw.noise.seed, "config.twin");
        if (!(tw.noise.frequency >= 0.0) || !(tw.noise.shape >= 0.0))
            r.fail("config.twin: noise levels must be >= 0");
        c.twin = tw;
    }
    if (j.contains("measured")) {
        const auto& m = j.at("measured");
        r.keys(m, {"healthy", "damaged"}, "config.measured");
        MeasuredData md;
        r.get(m, "healthy", md.healthy_csv, "config.measured");
        r.get(m, "damaged", md.damaged_csv, "config.measured");
        if (md.healthy_csv.empty() || md.damaged_csv.empty())
            r.fail("config.measured: 'healthy' and 'damaged' csv paths are required");
        md.healthy_csv = detail::resolve_path(base_dir, md.healthy_csv);
        md.damaged_csv = detail::resolve_path(base_dir, md.damaged_csv);
        c.measured = md;
    }
    r.get(j, "output_dir", c.output_dir, "config");
    c.output_dir = detail::resolve_path(base_dir, c.output_dir);

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

inline RunConfig load_run_config(const std::string& path)
{
    json j;
    try {
        j = detail::read_json_file(path);
    } catch (const InvalidInput& e) {
        throw ConfigError({e.what()});
    }
    return parse_run_config(j, std::filesystem::path(path).parent_path().string());
}

/// Model, sensors and box a config describes, validated against each other.
struct ExperimentSetup {
    BeamModel model;
    SensorLayout sensors;
    DamageBox box;
};

inline ExperimentSetup build_setup(const RunConfig& c)
{
    ExperimentSetup s;
    if (!c.model_path.empty()) {
        s.model = load_model(c.model_path);
    } else {
        CantileverLayout layout = CantileverLayout::laboratory();
        if (!c.cantilever_layout_path.empty())
            layout = cantilever_layout_from_json(detail::read_json_file(c.cantilever_layout_path));
        s.model = make_cantilever_model(layout);
    }
    if (c.theory) s.model.theory = *c.theory;
    s.model.validate();

    std::vector<std::string> errors;
    if (c.uniform_sensors) {
        if (*c.uniform_sensors > s.model.element_count())
            errors.push_back("config.sensors.uniform: more sensors than elements");
        else
            s.sensors = SensorLayout::uniform(s.model.element_count(), *c.uniform_sensors);
    } else {
        s.sensors.nodes = c.sensor_nodes;
    }
    s.box = DamageBox{c.max_severity, c.length.value_or(s.model.length()), c.theta_min};
    const std::size_t dofs = 2 * s.model.node_count() - (s.model.boundary == Boundary::ClampedAtNodeZero ? 2 : 0);
    if (c.modes > dofs) errors.push_back("config.modes: more modes than degrees of freedom");
    if (c.twin) {
        if (!s.box.contains(c.twin->truth)) errors.push_back("config.twin: true damage lies outside the box");
        else if (!constraints(theta(s.model.node_positions, c.twin->truth), c.theta_min).feasible)
            errors.push_back("config.twin: true damage violates theta_min");
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return s;
}

/// One non-dominated point of a finished run.
struct FrontRow {
    double eps_f = 0.0;
    double eps_m = 0.0;
    DamageParams x;
    GridPoint grid;
};

struct ExperimentReport {
    std::vector<FrontRow> front;
    SearchResult search;
    std::size_t evaluations = 0;
    std::size_t barrier = 0;
    std::size_t solver_calls = 0;
    std::size_t failures = 0;
    double element_length = 0.0; ///< mean element length used for element units
    double seconds = 0.0;
};

/// Summary statistics of one column, as written to stats.csv.
struct ColumnStats {
    std::size_t count = 0;
    double min = 0.0;
    double avg = 0.0;
    double median = 0.0;
    double max = 0.0;
};

inline ColumnStats column_stats(std::vector<double> v)
{
    ColumnStats s;
    s.count = v.size();
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    double sum = 0.0;
    for (double x : v) sum += x;
    s.avg = sum / static_cast<double>(v.size());
    const std::size_t mid = v.size() / 2;
    s.median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    return s;
}

inline csv::Table front_table(const std::vector<FrontRow>& rows, double element_length)
{
    csv::Table t({"eps_f", "eps_m", "D", "mu_m", "sigma_m", "mu_elements", "sigma_elements", "grid_D", "grid_mu",
                  "grid_sigma"});
    for (const auto& r : rows)
        t.add_row({csv::format(r.eps_f), csv::format(r.eps_m), csv::format(r.x.severity), csv::format(r.x.center),
                   csv::format(r.x.extent), csv::format(r.x.center / element_length),
                   csv::format(r.x.extent / element_length), std::to_string(r.grid[0]), std::to_string(r.grid[1]),
                   std::to_string(r.grid[2])});
    return t;
}

inline csv::Table stats_table(const std::vector<FrontRow>& rows, double element_length)
{
    csv::Table t({"quantity", "count", "min", "avg", "median", "max"});
    auto column = [&](auto f) {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(f(r));
        return column_stats(std::move(v));
    };
    auto add = [&](const std::string& name, const ColumnStats& s) {
        t.add_row({name, std::to_string(s.count), csv::format(s.min), csv::format(s.avg), csv::format(s.median),
                   csv::format(s.max)});
    };
    add("D", column([](const FrontRow& r) { return r.x.severity; }));
    add("mu_m", column([](const FrontRow& r) { return r.x.center; }));
    add("sigma_m", column([](const FrontRow& r) { return r.x.extent; }));
    add("mu_elements", column([&](const FrontRow& r) { return r.x.center / element_length; }));
    add("sigma_elements", column([&](const FrontRow& r) { return r.x.extent / element_length; }));
    add("eps_f", column([](const FrontRow& r) { return r.eps_f; }));
    add("eps_m", column([](const FrontRow& r) { return r.eps_m; }));
    return t;
}

inline csv::Table theta_table(const std::vector<FrontRow>& rows, const BeamModel& model)
{
    csv::Table t({"point", "element", "position_m", "theta"});
    for (std::size_t p = 0; p < rows.size(); ++p) {
        const auto th = theta(model.node_positions, rows[p].x);
        for (std::size_t e = 0; e < th.size(); ++e)
            t.add_row({std::to_string(p + 1), std::to_string(e + 1),
                       csv::format(0.5 * (model.node_positions[e] + model.node_positions[e + 1])),
                       csv::format(th[e])});
    }
    return t;
}

/// Vertices of the horizontal/vertical interpolation between consecutive
/// front points (sorted by eps_f). Every vertex is weakly dominated by a
/// front point, so the path stays inside f[Omega] + R^2_+.
inline std::vector<std::pair<double, double>> staircase(std::vector<std::pair<double, double>> points)
{
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) out.emplace_back(points[i].first, points[i - 1].second);
        out.push_back(points[i]);
    }
    return out;
}

inline csv::Table staircase_table(const std::vector<FrontRow>& rows)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) pts.emplace_back(r.eps_f, r.eps_m);
    csv::Table t({"vertex", "eps_f", "eps_m"});
    const auto st = staircase(std::move(pts));
    for (std::size_t i = 0; i < st.size(); ++i)
        t.add_row({std::to_string(i + 1), csv::format(st[i].first), csv::format(st[i].second)});
    return t;
}

inline json trace_record(const IterationRecord& r)
{
    return json{{"iteration", r.iteration},
                {"base", r.base_size},
                {"samples", r.sample_size},
                {"steps", r.steps},
                {"unique_evaluations", r.unique_evaluations},
                {"cache_hits", r.cache_hits},
                {"infeasible", r.infeasible},
                {"hall_of_fame", r.hall_of_fame_size},
                {"base_changed", r.base_changed}};
}

/// Runs the configured damage-location study and writes front.csv,
/// stats.csv, theta_profiles.csv, staircase.csv and run.log to the output directory.
inline ExperimentReport run_experiment(const RunConfig& config)
{
    const auto started = std::chrono::steady_clock::now();
    const ExperimentSetup setup = build_setup(config);

    std::pair<ModalResult, ModalResult> measured;
    if (config.twin) {
        measured = make_synthetic_measurement(setup.model, setup.sensors, config.modes, config.twin->truth, setup.box,
                                              config.twin->noise);
    } else {
        measured.first = modal_from_csv(csv::Table::load(config.measured->healthy_csv));
        measured.second = modal_from_csv(csv::Table::load(config.measured->damaged_csv));
    }
    const auto states = UpdatingStates::create(setup.model, setup.sensors, config.modes, std::move(measured.first),
                                               std::move(measured.second));
    const DamageObjective objective(states, setup.box);

    const auto [lower, upper] = objective.bounds();
    const GridSpec spec{lower, upper, config.resolution};
    SearchOptions opts;
    opts.hall_of_fame = config.hall_of_fame;
    opts.budget = config.budget;
    opts.weights = config.weights;
    opts.threads = config.threads;

    ExperimentReport rep;
    rep.search = optimize([&](std::span<const double> x) { return objective(x); }, spec, opts);
    rep.evaluations = objective.counters().evaluations;
    rep.barrier = objective.counters().barrier;
    rep.solver_calls = objective.counters().solver_calls;
    rep.failures = objective.counters().failures;
    rep.element_length = setup.model.length() / static_cast<double>(setup.model.element_count());

    for (std::size_t i = 0; i < rep.search.images.size(); ++i) {
        const auto& img = rep.search.images[i];
        if (img.is_infeasible()) continue;
        const auto& p = rep.search.parameters[i];
        rep.front.push_back({img[0], img[1], {p[0], p[1], p[2]}, rep.search.grid_points[i]});
    }
    std::sort(rep.front.begin(), rep.front.end(), [](const FrontRow& a, const FrontRow& b) {
        if (a.eps_f != b.eps_f) return a.eps_f < b.eps_f;
        if (a.eps_m != b.eps_m) return a.eps_m < b.eps_m;
        return a.grid < b.grid;
    });

    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path out(config.output_dir);
    front_table(rep.front, rep.element_length).save((out / "front.csv").string());
    stats_table(rep.front, rep.element_length).save((out / "stats.csv").string());
    theta_table(rep.front, setup.model).save((out / "theta_profiles.csv").string());
    staircase_table(rep.front).save((out / "staircase.csv").string());

    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const auto log_path = (out / "run.log").string();
    std::ofstream log(log_path);
    if (!log) throw IoError("cannot open '" + log_path + "' for writing");
    for (const auto& r : rep.search.trace) log << trace_record(r).dump() << '\n';
    log << json{{"summary",
                 {{"front_size", rep.front.size()},
                  {"unique_evaluations", rep.search.unique_evaluations},
                  {"cache_hits", rep.search.cache_hits},
                  {"objective_evaluations", rep.evaluations},
                  {"barrier_rejections", rep.barrier},
                  {"eigensolves", rep.solver_calls},
                  {"solver_failures", rep.failures},
                  {"budget_exhausted", rep.search.budget_exhausted},
                  {"final_steps", rep.search.final_steps},
                  {"seconds", rep.seconds}}}}
               .dump()
        << '\n';
    if (!log) throw IoError("write failed for '" + log_path + "'");
    return rep;
}

} // namespace mogpsa
