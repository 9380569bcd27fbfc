#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airnet/engine.hpp"
#include "airnet/scenario_io.hpp"
#include "airnet/validation.hpp"
#include "airnet/weather.hpp"

namespace airnet {

namespace detail {

inline void print_network(const Scenario& scenario, std::ostream& out) {
    out << "zones (" << scenario.network.zones.size() << "):\n";
    for (std::size_t k = 0; k < scenario.network.zones.size(); ++k) {
        const Zone& z = scenario.network.zones[k];
        out << "  " << z.id << "  " << (z.name.empty() ? "-" : z.name)
            << "  ref_height=" << z.reference_height << " m\n";
    }
    out << "flow elements (" << scenario.network.elements.size() << "):\n";
    char line[160];
    for (const FlowElement& e : scenario.network.elements) {
        std::snprintf(line, sizeof line, "  %3d  %s  %d->%d  z=%.4f m  K=%.6g  n=%.4g%s\n", e.id,
                      to_string(e.kind), e.zone_a, e.zone_b, e.elevation, e.permeability,
                      e.exponent, e.cp ? "  wind-exposed" : "");
        out << line;
    }
    out << "vents (" << scenario.network.vents.size() << "):\n";
    for (const MechanicalVent& v : scenario.network.vents) {
        out << "  VMC zone " << v.zone << "  m3/h:";
        for (double r : v.schedule.values) out << " " << r;
        out << "\n";
    }
}

} // namespace detail

// Entry point used by both the real binary and the tests. Exit codes: 0 on
// success, 1 on validation/simulation failure, 2 on usage errors (bad flags,
// missing input files).
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"multizone building airflow network solver"};
    app.name("airnet");
    app.require_subcommand(1);

    std::string scenario_path;
    std::string weather_path;
    std::string out_dir;
    double rho_ref_override = 0.0;
    double tolerance_override = 0.0;

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Run a scenario over a weather series and write CSVs");
    simulate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate_cmd->add_option("--weather", weather_path, "Weather CSV")->required();
    simulate_cmd->add_option("--out", out_dir, "Output directory")->required();
    simulate_cmd->add_option("--rho-ref", rho_ref_override,
                             "Override the reference air density, kg/m^3 at 0 degC");
    simulate_cmd->add_option("--tolerance", tolerance_override,
                             "Override the solver residual tolerance, kg/s");

    CLI::App* check_cmd = app.add_subcommand("check", "Run the built-in analytic validation suite");

    CLI::App* describe_cmd =
        app.add_subcommand("describe", "Print the canonical network of a scenario");
    describe_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& help) {
        app.exit(help, out, err);
        return 0;
    } catch (const CLI::ParseError& bad_usage) {
        app.exit(bad_usage, out, err);
        return 2;
    }

    try {
        if (check_cmd->parsed()) {
            bool all_pass = true;
            for (const CheckResult& check : run_builtin_checks()) {
                out << (check.pass ? "PASS" : "FAIL") << "  " << check.name << ": " << check.detail
                    << "\n";
                all_pass = all_pass && check.pass;
            }
            return all_pass ? 0 : 1;
        }

        if (describe_cmd->parsed()) {
            if (!std::filesystem::exists(scenario_path)) {
                err << "airnet: no such file: " << scenario_path << "\n";
                return 2;
            }
            detail::print_network(parse_scenario(scenario_path), out);
            return 0;
        }

        // simulate
        if (!std::filesystem::exists(scenario_path)) {
            err << "airnet: no such file: " << scenario_path << "\n";
            return 2;
        }
        if (!std::filesystem::exists(weather_path)) {
            err << "airnet: no such file: " << weather_path << "\n";
            return 2;
        }
        Scenario scenario = parse_scenario(scenario_path);
        if (simulate_cmd->count("--rho-ref") > 0) {
            scenario.rho_ref = rho_ref_override;
            scenario.build(); // Walton permeabilities depend on rho_ref
        }
        if (simulate_cmd->count("--tolerance") > 0) {
            scenario.solver.residual_tolerance = tolerance_override;
        }
        const std::vector<WeatherRecord> series = parse_weather(weather_path);
        const std::vector<StepResult> results = simulate(scenario, series);
        write_results(scenario, results, out_dir);

        int failed = 0;
        for (const StepResult& r : results) failed += r.report.converged ? 0 : 1;
        out << "simulated " << results.size() << " steps, " << failed << " non-converged; results in "
            << out_dir << "\n";
        return 0;
    } catch (const ValidationError& invalid) {
        err << "airnet: invalid input:\n";
        for (const auto& issue : invalid.issues()) err << "  " << issue << "\n";
        return 1;
    } catch (const std::exception& failure) {
        err << "airnet: " << failure.what() << "\n";
        return 1;
    }
}

} // namespace airnet
