#include "sidelink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "sidelink/errors.hpp"
#include "sidelink/solver_exact.hpp"
#include "sidelink/solver_mikp.hpp"

namespace sidelink {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(int line, const std::string& what) {
    throw ConfigInvalid("config line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, int line) {
    const std::string t = trim(token);
    if (t.empty()) config_fail(line, "missing number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        config_fail(line, "'" + t + "' is not a number");
    return v;
}

long long parse_integer(const std::string& token, int line) {
    const double v = parse_number(token, line);
    if (v != std::floor(v) || std::abs(v) > 1e15)
        config_fail(line, "'" + trim(token) + "' is not an integer");
    return static_cast<long long>(v);
}

std::uint64_t parse_seed(const std::string& token, int line) {
    const std::string t = trim(token);
    if (t.empty() || t[0] == '-' ||
        t.find_first_not_of("0123456789") != std::string::npos)
        config_fail(line, "'" + t + "' is not an unsigned integer");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        config_fail(line, "'" + t + "' is not an unsigned integer");
    return v;
}

bool parse_flag(const std::string& token, int line) {
    const std::string t = trim(token);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    config_fail(line, "'" + t + "' is not a boolean (true/false)");
}

std::vector<int> parse_id_list(const std::string& text, int line,
                               int n_vehicles) {
    std::vector<int> ids;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) config_fail(line, "empty id in list");
        const auto dash = token.find('-');
        long long lo;
        long long hi;
        if (dash == std::string::npos) {
            lo = hi = parse_integer(token, line);
        } else {
            lo = parse_integer(token.substr(0, dash), line);
            hi = parse_integer(token.substr(dash + 1), line);
        }
        if (lo > hi) config_fail(line, "descending range '" + token + "'");
        for (long long v = lo; v <= hi; ++v) {
            if (v < 1 || v > n_vehicles)
                config_fail(line, "vehicle id " + std::to_string(v) +
                                      " outside 1.." +
                                      std::to_string(n_vehicles));
            ids.push_back(static_cast<int>(v));
        }
    }
    if (ids.empty()) config_fail(line, "empty id list");
    return ids;
}

} // namespace

CampaignConfig parse_config(const std::string& text) {
    CampaignConfig cfg;
    struct Entry {
        int line;
        std::string value;
    };
    std::vector<Entry> cluster_lines;
    std::vector<Entry> qos_lines;
    std::map<std::string, int> seen;
    bool have_n = false;
    bool have_k = false;
    bool have_l = false;

    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line =
            trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            config_fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) config_fail(line_no, "missing key");
        if (value.empty())
            config_fail(line_no, "missing value for '" + key + "'");

        if (key == "cluster") {
            cluster_lines.push_back({line_no, value});
            continue;
        }
        if (key == "qos_mbps") {
            qos_lines.push_back({line_no, value});
            continue;
        }
        if (seen.count(key))
            config_fail(line_no, "duplicate key '" + key + "' (first on line " +
                                     std::to_string(seen[key]) + ")");
        seen[key] = line_no;

        if (key == "n_vehicles") {
            const long long v = parse_integer(value, line_no);
            if (v < 1) config_fail(line_no, "n_vehicles must be >= 1");
            cfg.scenario.n_vehicles = static_cast<int>(v);
            have_n = true;
        } else if (key == "n_subchannels") {
            const long long v = parse_integer(value, line_no);
            if (v < 1) config_fail(line_no, "n_subchannels must be >= 1");
            cfg.n_subchannels = static_cast<int>(v);
            have_k = true;
        } else if (key == "n_subframes") {
            const long long v = parse_integer(value, line_no);
            if (v < 1) config_fail(line_no, "n_subframes must be >= 1");
            cfg.n_subframes = static_cast<int>(v);
            have_l = true;
        } else if (key == "bandwidth_hz") {
            const double v = parse_number(value, line_no);
            if (v <= 0) config_fail(line_no, "bandwidth_hz must be positive");
            cfg.bandwidth_hz = v;
        } else if (key == "sinr_min_db") {
            cfg.sinr_min_db = parse_number(value, line_no);
        } else if (key == "sinr_max_db") {
            cfg.sinr_max_db = parse_number(value, line_no);
        } else if (key == "epsilon_mbps") {
            const double v = parse_number(value, line_no);
            if (v < 0) config_fail(line_no, "epsilon_mbps must be >= 0");
            cfg.scenario.epsilon = v * 1e6;
        } else if (key == "trials") {
            const long long v = parse_integer(value, line_no);
            if (v < 1) config_fail(line_no, "trials must be >= 1");
            cfg.trials = static_cast<int>(v);
        } else if (key == "base_seed") {
            cfg.base_seed = parse_seed(value, line_no);
        } else if (key == "solvers") {
            if (value == "exact") {
                cfg.run_exact = true;
                cfg.run_mikp = false;
            } else if (value == "mikp") {
                cfg.run_exact = false;
                cfg.run_mikp = true;
            } else if (value == "both") {
                cfg.run_exact = true;
                cfg.run_mikp = true;
            } else {
                config_fail(line_no, "solvers must be exact, mikp or both");
            }
        } else if (key == "time_limit") {
            const double v = parse_number(value, line_no);
            if (v < 0) config_fail(line_no, "time_limit must be >= 0");
            cfg.time_limit = v;
        } else if (key == "node_limit") {
            const long long v = parse_integer(value, line_no);
            if (v < 0) config_fail(line_no, "node_limit must be >= 0");
            cfg.node_limit = static_cast<std::uint64_t>(v);
        } else if (key == "resolution_kbps") {
            const double v = parse_number(value, line_no);
            if (v <= 0) config_fail(line_no, "resolution_kbps must be positive");
            cfg.resolution = v * 1e3;
        } else if (key == "workers") {
            const long long v = parse_integer(value, line_no);
            if (v < 1) config_fail(line_no, "workers must be >= 1");
            cfg.workers = static_cast<int>(v);
        } else if (key == "timings") {
            cfg.include_timings = parse_flag(value, line_no);
        } else if (key == "output") {
            cfg.output_path = value;
        } else if (key == "format") {
            if (value != "csv" && value != "json")
                config_fail(line_no, "format must be csv or json");
            cfg.format = value;
        } else {
            config_fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (!have_n) throw ConfigInvalid("config: missing n_vehicles");
    if (!have_k) throw ConfigInvalid("config: missing n_subchannels");
    if (!have_l) throw ConfigInvalid("config: missing n_subframes");
    if (cluster_lines.empty())
        throw ConfigInvalid("config: at least one cluster line is required");
    for (const auto& entry : cluster_lines)
        cfg.scenario.clusters.push_back(
            parse_id_list(entry.value, entry.line, cfg.scenario.n_vehicles));

    if (qos_lines.empty())
        throw ConfigInvalid("config: at least one qos_mbps line is required");
    cfg.scenario.qos.assign(static_cast<size_t>(cfg.scenario.n_vehicles), -1.0);
    for (const auto& entry : qos_lines) {
        const auto colon = entry.value.find(':');
        if (colon == std::string::npos)
            config_fail(entry.line, "expected '<rate>: <id-list>'");
        const double rate = parse_number(entry.value.substr(0, colon),
                                         entry.line);
        if (rate <= 0) config_fail(entry.line, "qos rate must be positive");
        const auto ids = parse_id_list(entry.value.substr(colon + 1),
                                       entry.line, cfg.scenario.n_vehicles);
        for (int id : ids) {
            if (cfg.scenario.qos[static_cast<size_t>(id - 1)] >= 0)
                config_fail(entry.line, "vehicle " + std::to_string(id) +
                                            " already has a qos entry");
            cfg.scenario.qos[static_cast<size_t>(id - 1)] = rate * 1e6;
        }
    }
    std::string missing;
    for (int id = 1; id <= cfg.scenario.n_vehicles; ++id)
        if (cfg.scenario.qos[static_cast<size_t>(id - 1)] < 0)
            missing += (missing.empty() ? "" : ", ") + std::to_string(id);
    if (!missing.empty())
        throw ConfigInvalid("config: vehicles without a qos_mbps entry: " +
                            missing);
    return cfg;
}

CampaignConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

Scenario scenario_from_config(const CampaignConfig& config) {
    return validate_scenario(config.scenario);
}

ChannelGrid grid_from_config(const CampaignConfig& config) {
    return ChannelGrid(config.n_subframes, config.n_subchannels,
                       config.bandwidth_hz);
}

GroupStats aggregate_stats(const std::vector<double>& samples) {
    if (samples.empty()) throw EmptySamples("aggregate_stats: no samples");
    GroupStats g;
    g.sample_count = samples.size();
    g.max = samples.front();
    g.min = samples.front();
    double sum = 0.0;
    for (double v : samples) {
        sum += v;
        g.max = std::max(g.max, v);
        g.min = std::min(g.min, v);
    }
    g.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double squares = 0.0;
        for (double v : samples) {
            const double d = v - g.mean;
            squares += d * d;
        }
        g.sample_std =
            std::sqrt(squares / static_cast<double>(samples.size() - 1));
    }
    return g;
}

namespace {

// Everything one trial contributes for one solver.
struct SolverTrial {
    TrialRecord record;
    Vector rates;
    bool success = false;
    std::size_t type2 = 0;
    std::size_t type3 = 0;
    std::size_t type4 = 0;
    std::size_t qos_bad = 0;
};

SolverTrial digest_trial(int trial, std::uint64_t seed, const SolveResult& r,
                         const Scenario& s, const ChannelGrid& g,
                         const CapacityMap& c, const ConstraintSystem& cs,
                         SolveStatus success_status) {
    SolverTrial out;
    out.record = {trial, seed, r.objective, r.status, r.elapsed};
    out.rates = r.per_vehicle_rate;
    out.success = r.status == success_status;
    const ConflictReport report = verify(r.assignment, s, g, c, cs);
    out.type2 = report.type2.size();
    out.type3 = report.type3.size();
    out.type4 = report.type4.size();
    if (success_status == SolveStatus::heuristic) {
        // the heuristic promises rates at or below demand, not inside
        // the window
        for (int v = 0; v < s.n_vehicles(); ++v) {
            const double q = s.qos()(v);
            if (out.rates(v) > q + 1e-9 * std::abs(q)) ++out.qos_bad;
        }
    } else {
        out.qos_bad = report.qos_violations.size();
    }
    return out;
}

SolverCampaign reduce_trials(const std::string& name,
                             const std::vector<SolverTrial>& trials,
                             const Scenario& scenario) {
    SolverCampaign sc;
    sc.solver = name;
    sc.n_trials = trials.size();

    // QoS groups in descending target order.
    std::vector<double> targets(scenario.qos().data(),
                                scenario.qos().data() + scenario.n_vehicles());
    std::sort(targets.begin(), targets.end(), std::greater<>());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    std::vector<std::vector<double>> samples(targets.size());
    const auto group_of = [&](double q) {
        return static_cast<size_t>(
            std::find(targets.begin(), targets.end(), q) - targets.begin());
    };

    for (const SolverTrial& t : trials) {
        sc.trials.push_back(t.record);
        switch (t.record.status) {
            case SolveStatus::optimal:
            case SolveStatus::heuristic: ++sc.n_success; break;
            case SolveStatus::infeasible: ++sc.n_infeasible; break;
            case SolveStatus::timeout: ++sc.n_timeout; break;
        }
        sc.type2_conflicts += t.type2;
        sc.type3_conflicts += t.type3;
        sc.type4_conflicts += t.type4;
        if (t.success) {
            sc.qos_violations += t.qos_bad;
            for (int v = 0; v < scenario.n_vehicles(); ++v)
                samples[group_of(scenario.qos()(v))].push_back(t.rates(v));
        }
    }
    sc.feasibility_rate = sc.n_trials == 0
                              ? 0.0
                              : static_cast<double>(sc.n_success) /
                                    static_cast<double>(sc.n_trials);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        GroupStats g;
        if (!samples[i].empty()) g = aggregate_stats(samples[i]);
        g.qos = targets[i];
        sc.groups.push_back(g);
    }
    return sc;
}

} // namespace

CampaignResult run_trials(const CampaignConfig& config) {
    if (config.trials < 1) throw ConfigInvalid("trials must be >= 1");
    if (config.workers < 1) throw ConfigInvalid("workers must be >= 1");
    if (!config.run_exact && !config.run_mikp)
        throw ConfigInvalid("no solver enabled");

    const Scenario scenario = scenario_from_config(config);
    const ChannelGrid grid = grid_from_config(config);
    const ConstraintSystem system = build_constraints(scenario, grid);

    struct TrialOutput {
        SolverTrial exact;
        SolverTrial mikp;
    };
    std::vector<TrialOutput> outputs(static_cast<size_t>(config.trials));

    std::atomic<int> next{0};
    const auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= config.trials) return;
            const std::uint64_t seed =
                config.base_seed + static_cast<std::uint64_t>(t);
            ChannelModelParams params;
            params.sinr_min_db = config.sinr_min_db;
            params.sinr_max_db = config.sinr_max_db;
            params.seed = seed;
            const CapacityMap capacities =
                generate_capacities(scenario, grid, params);
            auto& out = outputs[static_cast<size_t>(t)];
            if (config.run_exact) {
                SolverOptions opt;
                opt.time_limit = config.time_limit;
                opt.node_limit = config.node_limit;
                const SolveResult r =
                    solve_exact(scenario, grid, capacities, system, opt);
                out.exact = digest_trial(t, seed, r, scenario, grid,
                                         capacities, system,
                                         SolveStatus::optimal);
            }
            if (config.run_mikp) {
                SolveResult r;
                try {
                    r = run_mikp(scenario, grid, capacities, system, seed,
                                 config.resolution);
                } catch (const Error&) {
                    // the heuristic cannot place some cluster; record
                    // the trial as infeasible and move on
                    r.status = SolveStatus::infeasible;
                    r.assignment = Assignment::Zero(scenario.n_vehicles(),
                                                    grid.total_subchannels());
                    r.per_vehicle_rate = Vector::Zero(scenario.n_vehicles());
                    r.objective = 0.0;
                }
                out.mikp = digest_trial(t, seed, r, scenario, grid, capacities,
                                        system, SolveStatus::heuristic);
            }
        }
    };

    const int n_threads = std::min(config.workers, config.trials);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    CampaignResult result;
    if (config.run_exact) {
        std::vector<SolverTrial> trials;
        trials.reserve(outputs.size());
        for (const auto& o : outputs) trials.push_back(o.exact);
        result.solvers.push_back(reduce_trials("exact", trials, scenario));
    }
    if (config.run_mikp) {
        std::vector<SolverTrial> trials;
        trials.reserve(outputs.size());
        for (const auto& o : outputs) trials.push_back(o.mikp);
        result.solvers.push_back(reduce_trials("mikp", trials, scenario));
    }
    return result;
}

namespace {

std::string mbps(double bps) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", bps / 1e6);
    return buf;
}

} // namespace

std::string emit_report_csv(const CampaignResult& result) {
    std::string out = "solver,qos_mbps,mean,max,min,std,samples\n";
    for (const SolverCampaign& sc : result.solvers)
        for (const GroupStats& g : sc.groups) {
            out += sc.solver;
            out += ',' + mbps(g.qos) + ',' + mbps(g.mean) + ',' + mbps(g.max) +
                   ',' + mbps(g.min) + ',' + mbps(g.sample_std) + ',' +
                   std::to_string(g.sample_count) + '\n';
        }
    return out;
}

std::string emit_report_json(const CampaignResult& result,
                             bool include_timings) {
    nlohmann::ordered_json root;
    root["solvers"] = nlohmann::ordered_json::array();
    for (const SolverCampaign& sc : result.solvers) {
        nlohmann::ordered_json s;
        s["solver"] = sc.solver;
        s["n_trials"] = sc.n_trials;
        s["n_success"] = sc.n_success;
        s["n_infeasible"] = sc.n_infeasible;
        s["n_timeout"] = sc.n_timeout;
        s["feasibility_rate"] = sc.feasibility_rate;
        s["conflicts"] = {{"type2", sc.type2_conflicts},
                          {"type3", sc.type3_conflicts},
                          {"type4", sc.type4_conflicts},
                          {"qos_window", sc.qos_violations}};
        s["groups"] = nlohmann::ordered_json::array();
        for (const GroupStats& g : sc.groups)
            s["groups"].push_back({{"qos_bps", g.qos},
                                   {"mean_bps", g.mean},
                                   {"max_bps", g.max},
                                   {"min_bps", g.min},
                                   {"std_bps", g.sample_std},
                                   {"samples", g.sample_count}});
        s["trials"] = nlohmann::ordered_json::array();
        for (const TrialRecord& t : sc.trials) {
            nlohmann::ordered_json record{{"trial", t.trial},
                                          {"seed", t.seed},
                                          {"objective_bps", t.objective},
                                          {"status", to_string(t.status)}};
            if (include_timings) record["elapsed_s"] = t.elapsed;
            s["trials"].push_back(std::move(record));
        }
        root["solvers"].push_back(std::move(s));
    }
    return root.dump(2) + "\n";
}

CampaignResult parse_report_json(const std::string& text) {
    try {
        const nlohmann::json root = nlohmann::json::parse(text);
        CampaignResult result;
        for (const auto& s : root.at("solvers")) {
            SolverCampaign sc;
            sc.solver = s.at("solver").get<std::string>();
            sc.n_trials = s.at("n_trials").get<std::size_t>();
            sc.n_success = s.at("n_success").get<std::size_t>();
            sc.n_infeasible = s.at("n_infeasible").get<std::size_t>();
            sc.n_timeout = s.at("n_timeout").get<std::size_t>();
            sc.feasibility_rate = s.at("feasibility_rate").get<double>();
            const auto& conflicts = s.at("conflicts");
            sc.type2_conflicts = conflicts.at("type2").get<std::size_t>();
            sc.type3_conflicts = conflicts.at("type3").get<std::size_t>();
            sc.type4_conflicts = conflicts.at("type4").get<std::size_t>();
            sc.qos_violations = conflicts.at("qos_window").get<std::size_t>();
            for (const auto& g : s.at("groups")) {
                GroupStats gs;
                gs.qos = g.at("qos_bps").get<double>();
                gs.mean = g.at("mean_bps").get<double>();
                gs.max = g.at("max_bps").get<double>();
                gs.min = g.at("min_bps").get<double>();
                gs.sample_std = g.at("std_bps").get<double>();
                gs.sample_count = g.at("samples").get<std::size_t>();
                sc.groups.push_back(gs);
            }
            for (const auto& t : s.at("trials")) {
                TrialRecord tr;
                tr.trial = t.at("trial").get<int>();
                tr.seed = t.at("seed").get<std::uint64_t>();
                tr.objective = t.at("objective_bps").get<double>();
                tr.status =
                    solve_status_from_string(t.at("status").get<std::string>());
                tr.elapsed = t.value("elapsed_s", 0.0);
                sc.trials.push_back(tr);
            }
            result.solvers.push_back(std::move(sc));
        }
        return result;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("report json: ") + e.what());
    }
}

std::string write_assignment_csv(const Assignment& assignment) {
    std::string out;
    for (Index r = 0; r < assignment.rows(); ++r) {
        for (Index c = 0; c < assignment.cols(); ++c) {
            if (c > 0) out += ',';
            out += assignment(r, c) != 0.0 ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

Assignment parse_assignment_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            cell = trim(cell);
            if (cell == "0") {
                row.push_back(0.0);
            } else if (cell == "1") {
                row.push_back(1.0);
            } else {
                throw ConfigInvalid("assignment line " +
                                    std::to_string(line_no) + ": '" + cell +
                                    "' is not 0 or 1");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigInvalid("assignment line " + std::to_string(line_no) +
                                ": expected " +
                                std::to_string(rows.front().size()) +
                                " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigInvalid("assignment: no rows");
    Assignment a(static_cast<Index>(rows.size()),
                 static_cast<Index>(rows.front().size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows.front().size(); ++c)
            a(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return a;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed while reading '" + path + "'");
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace sidelink
