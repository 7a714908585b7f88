// Command-line front end: run <config> | make-model | modal <model> | benchmark

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "mogpsa.hpp"

namespace {

constexpr int exit_config = 1;
constexpr int exit_runtime = 2;

int cmd_run(const std::string& path)
{
    const auto config = mogpsa::load_run_config(path);
    const auto rep = mogpsa::run_experiment(config);
    std::cout << "front points: " << rep.front.size() << "\n"
              << "unique evaluations: " << rep.search.unique_evaluations << " (cache hits "
              << rep.search.cache_hits << ", barrier " << rep.barrier << ", eigensolves " << rep.solver_calls
              << ")\n"
              << "output: " << config.output_dir << "\n";
    if (!rep.front.empty()) {
        const auto& best = rep.front.front();
        std::cout << "lowest eps_f: " << mogpsa::csv::format(best.eps_f) << " at D=" << best.x.severity
                  << " mu=" << best.x.center / rep.element_length << " sigma=" << best.x.extent / rep.element_length
                  << " (elements)\n";
    }
    return 0;
}

int cmd_make_model(const std::string& layout_path, const std::string& out)
{
    auto layout = mogpsa::CantileverLayout::laboratory();
    if (!layout_path.empty()) layout = mogpsa::cantilever_layout_from_json(mogpsa::detail::read_json_file(layout_path));
    const auto model = mogpsa::make_cantilever_model(layout);
    if (out.empty())
        std::cout << mogpsa::model_to_json(model).dump(2) << '\n';
    else
        mogpsa::save_model(out, model);
    return 0;
}

int cmd_modal(const std::string& model_path, std::size_t modes, std::size_t sensors,
              const std::vector<double>& damage, const std::string& out)
{
    const auto model = mogpsa::load_model(model_path);
    const auto layout = mogpsa::SensorLayout::uniform(model.element_count(), sensors);
    std::vector<double> th(model.element_count(), 1.0);
    if (!damage.empty()) {
        th = mogpsa::theta(model.node_positions, {damage[0], damage[1], damage[2]});
        for (double t : th)
            if (!(t > 0.0)) throw mogpsa::InvalidInput("damage removes all stiffness of some element");
    }
    const auto table = mogpsa::modal_to_csv(mogpsa::modal_analysis(model, th, layout, modes));
    if (out.empty())
        std::cout << table.str();
    else
        table.save(out);
    return 0;
}

int cmd_benchmark(bool all, std::vector<std::string> names)
{
    if (all) names = mogpsa::benchmark_names();
    bool ok = true;
    for (const auto& r : mogpsa::benchmark_suite(names)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.seconds << " s  " << r.detail << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : exit_runtime;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-objective pattern search for beam damage location"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run a damage-location study from a JSON config");
    run->add_option("config", config_path, "run config")->required();

    std::string layout_path, model_out;
    auto* make = app.add_subcommand("make-model", "write the cantilever beam model as JSON");
    make->add_option("--layout", layout_path, "cantilever layout JSON (default: built-in)");
    make->add_option("--out", model_out, "output file (default: stdout)");

    std::string model_path, modal_out;
    std::size_t modes = 5, sensors = 15;
    auto* modal = app.add_subcommand("modal", "eigenfrequencies and sensor mode shapes of a model");
    modal->add_option("model", model_path, "model JSON")->required();
    modal->add_option("--modes", modes, "number of modes")->check(CLI::PositiveNumber);
    modal->add_option("--sensors", sensors, "uniformly spaced sensors")->check(CLI::PositiveNumber);
    modal->add_option("--out", modal_out, "output CSV (default: stdout)");
    std::vector<double> damage;
    modal->add_option("--damage", damage, "damage state D mu sigma (default: healthy)")->expected(3);

    bool all = false;
    std::vector<std::string> names;
    auto* bench = app.add_subcommand("benchmark", "analytic test problems and sorting oracles");
    bench->add_flag("--all", all, "run every case");
    bench->add_option("names", names, "cases to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_config;
    }

    try {
        if (*run) return cmd_run(config_path);
        if (*make) return cmd_make_model(layout_path, model_out);
        if (*modal) return cmd_modal(model_path, modes, sensors, damage, modal_out);
        return cmd_benchmark(all, names);
    } catch (const mogpsa::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
        return exit_config;
    } catch (const mogpsa::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
