#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "sidelink/errors.hpp"
#include "sidelink/harness.hpp"
#include "sidelink/solver_exact.hpp"
#include "sidelink/solver_mikp.hpp"

namespace {

using namespace sidelink;

void print_solve(const std::string& name, const SolveResult& r,
                 const Scenario& scenario, const ChannelGrid& grid,
                 const CapacityMap& capacities,
                 const ConstraintSystem& system) {
    std::cout << "solver: " << name << "\n";
    std::cout << "status: " << to_string(r.status) << "\n";
    std::printf("objective_mbps: %.4f\n", r.objective / 1e6);
    std::cout << "nodes_explored: " << r.nodes_explored << "\n";
    std::printf("elapsed_s: %.3f\n", r.elapsed);
    const Matrix folded = fold_to_subframes(r.assignment, grid);
    std::cout << "vehicle  subframe  subchannels  rate_mbps  qos_mbps\n";
    for (int v = 1; v <= scenario.n_vehicles(); ++v) {
        std::string subframes;
        for (int f = 1; f <= grid.n_subframes(); ++f)
            if (folded(v - 1, f - 1) > 0)
                subframes += (subframes.empty() ? "" : "+") +
                             std::to_string(f);
        if (subframes.empty()) subframes = "-";
        std::string subchannels;
        for (int k = 1; k <= grid.total_subchannels(); ++k)
            if (r.assignment(v - 1, k - 1) != 0)
                subchannels += (subchannels.empty() ? "" : ",") +
                               std::to_string(k);
        if (subchannels.empty()) subchannels = "-";
        std::printf("%-8d %-9s %-12s %-10.4f %.4f\n", v, subframes.c_str(),
                    subchannels.c_str(), r.per_vehicle_rate(v - 1) / 1e6,
                    scenario.qos_of(v) / 1e6);
    }
    const ConflictReport report =
        verify(r.assignment, scenario, grid, capacities, system);
    std::cout << "conflicts: type2=" << report.type2.size()
              << " type3=" << report.type3.size()
              << " type4=" << report.type4.size()
              << " qos_window=" << report.qos_violations.size() << "\n";
}

int do_run(const CampaignConfig& config) {
    try {
        const CampaignResult result = run_trials(config);
        const std::string report =
            config.format == "json"
                ? emit_report_json(result, config.include_timings)
                : emit_report_csv(result);
        if (config.output_path.empty()) {
            std::cout << report;
        } else {
            write_text_file(config.output_path, report);
            std::cout << "report written to " << config.output_path << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int do_solve(const CampaignConfig& config, std::uint64_t seed,
             const std::string& output) {
    const Scenario scenario = scenario_from_config(config);
    const ChannelGrid grid = grid_from_config(config);
    if (!output.empty() && config.run_exact && config.run_mikp) {
        std::cerr << "error: --output needs --solver exact or --solver mikp\n";
        return 1;
    }
    try {
        const ConstraintSystem system = build_constraints(scenario, grid);
        ChannelModelParams params;
        params.sinr_min_db = config.sinr_min_db;
        params.sinr_max_db = config.sinr_max_db;
        params.seed = seed;
        const CapacityMap capacities =
            generate_capacities(scenario, grid, params);
        bool first = true;
        Assignment to_write;
        if (config.run_exact) {
            SolverOptions opt;
            opt.time_limit = config.time_limit;
            opt.node_limit = config.node_limit;
            const SolveResult r =
                solve_exact(scenario, grid, capacities, system, opt);
            print_solve("exact", r, scenario, grid, capacities, system);
            to_write = r.assignment;
            first = false;
        }
        if (config.run_mikp) {
            if (!first) std::cout << "\n";
            SolveResult r;
            try {
                r = run_mikp(scenario, grid, capacities, system, seed,
                             config.resolution);
            } catch (const InsufficientSubframes& e) {
                std::cout << "solver: mikp\nstatus: infeasible\n";
                std::cout << "note: " << e.what() << "\n";
                return 2;
            }
            print_solve("mikp", r, scenario, grid, capacities, system);
            to_write = r.assignment;
        }
        if (!output.empty()) {
            write_text_file(output, write_assignment_csv(to_write));
            std::cout << "assignment written to " << output << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int do_audit(const CampaignConfig& config, std::uint64_t seed,
             const std::string& assignment_path) {
    const Scenario scenario = scenario_from_config(config);
    const ChannelGrid grid = grid_from_config(config);
    try {
        const ConstraintSystem system = build_constraints(scenario, grid);
        ChannelModelParams params;
        params.sinr_min_db = config.sinr_min_db;
        params.sinr_max_db = config.sinr_max_db;
        params.seed = seed;
        const CapacityMap capacities =
            generate_capacities(scenario, grid, params);
        const Assignment assignment =
            parse_assignment_csv(read_text_file(assignment_path));
        const ConflictReport report =
            verify(assignment, scenario, grid, capacities, system);
        for (const auto& q : report.qos_violations)
            std::printf(
                "qos_window: vehicle %d achieves %.4f Mbps outside "
                "[%.4f, %.4f]\n",
                q.vehicle, q.achieved_rate / 1e6, q.window_lo / 1e6,
                q.window_hi / 1e6);
        for (const auto& v : report.type2)
            std::cout << "type2: vehicles " << v.pair.first << " and "
                      << v.pair.second << " share subframe " << v.subframe
                      << "\n";
        for (const auto& v : report.type3) {
            std::cout << "type3: vehicle " << v.vehicle << " spans subframes";
            for (int f : v.subframes) std::cout << " " << f;
            std::cout << "\n";
        }
        for (const auto& v : report.type4)
            std::cout << "type4: vehicles " << v.pair.first << " and "
                      << v.pair.second << " share subchannel " << v.subchannel
                      << "\n";
        if (report.empty()) {
            std::cout << "assignment is conflict-free and inside every QoS "
                         "window\n";
            return 0;
        }
        std::cout << "violations: qos_window=" << report.qos_violations.size()
                  << " type2=" << report.type2.size()
                  << " type3=" << report.type3.size()
                  << " type4=" << report.type4.size() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int do_example() {
    RawScenario raw;
    raw.n_vehicles = 4;
    raw.clusters = {{1, 2, 3}, {1, 2, 4}};
    raw.qos = {1e6, 1e6, 1e6, 1e6};
    raw.epsilon = 0.0;
    const Scenario scenario = validate_scenario(raw);
    const ChannelGrid grid(3, 3);
    const ConstraintSystem system = build_constraints(scenario, grid);

    std::cout << "4 vehicles, clusters {1,2,3} and {1,2,4}, K=3, L=3\n\n";
    std::cout << "intra-cluster pairs:";
    for (const auto& p : system.intra_pairs)
        std::cout << " (" << p.first << "," << p.second << ")";
    std::cout << "\none-hop pairs:";
    for (const auto& p : system.hop_pairs)
        std::cout << " (" << p.first << "," << p.second << ")";
    std::cout << "\n\nG_minus =\n" << system.G_minus;
    std::cout << "\n\nG_plus =\n" << system.G_plus;
    std::cout << "\n\nH_minus =\n" << system.H_minus;
    std::cout << "\n\nH_plus =\n" << system.H_plus;
    std::cout << "\n\nQ_minus^T * Q_plus =\n"
              << system.Q_minus.transpose() * system.Q_plus;
    std::cout << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"subchannel allocation for V2V sidelink clusters: exact "
                 "and heuristic solvers with a seeded Monte Carlo harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::string format;
    std::string solver_choice;
    std::string assignment_path;
    int trials = 0;
    int workers = 0;
    std::uint64_t seed = 0;
    double epsilon_mbps = 0.0;
    double time_limit = 0.0;
    std::uint64_t node_limit = 0;
    double resolution_kbps = 0.0;
    bool timings = false;

    const auto add_shared = [&](CLI::App* cmd, bool with_campaign) {
        cmd->add_option("--config", config_path, "campaign config file")
            ->required();
        cmd->add_option("--seed", seed, "override base_seed");
        cmd->add_option("--solver", solver_choice,
                        "solvers to run: exact, mikp or both")
            ->check(CLI::IsMember({"exact", "mikp", "both"}));
        cmd->add_option("--epsilon", epsilon_mbps,
                        "QoS window half-width in Mbps");
        cmd->add_option("--time-limit", time_limit,
                        "exact-solver budget per trial in seconds");
        cmd->add_option("--node-limit", node_limit,
                        "exact-solver node budget per trial (0 = unlimited)");
        cmd->add_option("--resolution", resolution_kbps,
                        "knapsack step in kbit/s");
        if (with_campaign) {
            cmd->add_option("--trials", trials, "number of Monte Carlo trials");
            cmd->add_option("--workers", workers, "trial worker threads");
            cmd->add_option("--format", format, "report format")
                ->check(CLI::IsMember({"csv", "json"}));
            cmd->add_flag("--timings", timings,
                          "include per-trial elapsed seconds in JSON reports");
        }
    };

    CLI::App* run_cmd = app.add_subcommand(
        "run", "run a seeded Monte Carlo campaign and emit a report");
    add_shared(run_cmd, true);
    run_cmd->add_option("--output", output,
                        "write the report here instead of stdout");

    CLI::App* solve_cmd = app.add_subcommand(
        "solve", "solve a single seeded instance and print the result");
    add_shared(solve_cmd, false);
    solve_cmd->add_option("--output", output,
                          "write the assignment matrix as CSV");

    CLI::App* audit_cmd = app.add_subcommand(
        "audit", "verify an assignment CSV against a config's constraints");
    audit_cmd->add_option("--config", config_path, "campaign config file")
        ->required();
    audit_cmd->add_option("--seed", seed,
                          "seed of the trial that produced the assignment");
    audit_cmd->add_option("--epsilon", epsilon_mbps,
                          "QoS window half-width in Mbps");
    audit_cmd->add_option("assignment", assignment_path,
                          "assignment CSV to audit")
        ->required();

    CLI::App* example_cmd = app.add_subcommand(
        "example", "print the selector matrices of a built-in 4-vehicle "
                   "example");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (app.got_subcommand(example_cmd)) return do_example();

    CampaignConfig config;
    std::uint64_t effective_seed = 0;
    try {
        config = load_config(config_path);
        CLI::App* active = app.get_subcommands().front();
        const auto given = [&](const std::string& name) {
            const CLI::Option* opt = active->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--trials")) config.trials = trials;
        if (given("--seed")) config.base_seed = seed;
        if (given("--solver")) {
            config.run_exact = solver_choice != "mikp";
            config.run_mikp = solver_choice != "exact";
        }
        if (given("--epsilon")) config.scenario.epsilon = epsilon_mbps * 1e6;
        if (given("--time-limit")) config.time_limit = time_limit;
        if (given("--node-limit")) config.node_limit = node_limit;
        if (given("--resolution")) config.resolution = resolution_kbps * 1e3;
        if (given("--workers")) config.workers = workers;
        if (given("--format")) config.format = format;
        if (timings) config.include_timings = true;
        if (given("--output") && active != solve_cmd)
            config.output_path = output;
        effective_seed = config.base_seed;
        // surface scenario/grid problems as config errors up front
        scenario_from_config(config);
        grid_from_config(config);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    if (app.got_subcommand(run_cmd)) return do_run(config);
    if (app.got_subcommand(solve_cmd))
        return do_solve(config, effective_seed, output);
    return do_audit(config, effective_seed, assignment_path);
}
