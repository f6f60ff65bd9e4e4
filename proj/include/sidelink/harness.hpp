#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sidelink/channel.hpp"
#include "sidelink/constraints.hpp"
#include "sidelink/result.hpp"
#include "sidelink/scenario.hpp"

namespace sidelink {

// Everything a Monte Carlo campaign needs.  Parsed from a flat
// key/value text file (see parse_config) or assembled directly.
// Rates live in bit/s here; the file format speaks Mbps/kbps for
// readability and parse_config converts.
struct CampaignConfig {
    RawScenario scenario;          // vehicles, clusters, QoS, epsilon
    int n_subframes = 0;           // L
    int n_subchannels = 0;         // K
    double bandwidth_hz = 1.26e6;  // per-subchannel bandwidth B
    double sinr_min_db = 0.0;
    double sinr_max_db = 20.0;
    int trials = 1;
    std::uint64_t base_seed = 0;
    bool run_exact = true;
    bool run_mikp = true;
    double time_limit = 60.0;      // exact-solver budget per trial, seconds
    std::uint64_t node_limit = 0;  // exact-solver node budget per trial
                                   // (0 = unlimited); node-capped trials
                                   // report status=timeout deterministically
    double resolution = 10e3;      // knapsack DP step, bit/s
    int workers = 1;
    bool include_timings = false;  // put per-trial elapsed into JSON reports
    std::string output_path;       // empty = stdout
    std::string format = "csv";    // csv | json
};

// Parses the campaign file format: one `key = value` pair per line,
// `#` comments, blank lines ignored.  Repeated `cluster = <id-list>`
// lines define clusters in order; repeated `qos_mbps = <rate>: <id-list>`
// lines assign the demanded rate to those vehicles.  An id-list is a
// comma-separated mix of single ids and inclusive ranges `a-b`.
// Throws ConfigInvalid with the offending line number on any unknown
// key, malformed value, duplicate or missing QoS coverage.
CampaignConfig parse_config(const std::string& text);

// parse_config over the contents of `path`; unreadable file -> IoError.
CampaignConfig load_config(const std::string& path);

Scenario scenario_from_config(const CampaignConfig& config);
ChannelGrid grid_from_config(const CampaignConfig& config);

// Spread statistics of one QoS group's achieved rates, bit/s.
struct GroupStats {
    double qos = 0.0;
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
    double sample_std = 0.0; // divisor n-1, zero for a single sample
    std::size_t sample_count = 0;

    bool operator==(const GroupStats&) const = default;
};

// Mean/max/min/sample-std over a nonempty list (throws EmptySamples);
// the qos field is left for the caller.
GroupStats aggregate_stats(const std::vector<double>& samples);

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    double objective = 0.0; // bit/s
    SolveStatus status = SolveStatus::infeasible;
    double elapsed = 0.0;   // seconds; omitted from reports unless
                            // include_timings is set

    bool operator==(const TrialRecord&) const = default;
};

// One solver's side of a campaign.  Rate statistics pool the
// per-vehicle achieved rates of successful trials only (exact:
// optimal, heuristic solver: heuristic); infeasible and timed-out
// trials are counted but contribute no samples.  Conflict counters
// come from the independent verifier over every produced assignment;
// QoS window violations are tallied for successful trials.
struct SolverCampaign {
    std::string solver; // "exact" | "mikp"
    std::vector<GroupStats> groups; // descending QoS target
    std::size_t n_trials = 0;
    std::size_t n_success = 0;
    std::size_t n_infeasible = 0;
    std::size_t n_timeout = 0;
    double feasibility_rate = 0.0; // n_success / n_trials
    std::size_t type2_conflicts = 0;
    std::size_t type3_conflicts = 0;
    std::size_t type4_conflicts = 0;
    std::size_t qos_violations = 0;
    std::vector<TrialRecord> trials;

    bool operator==(const SolverCampaign&) const = default;
};

struct CampaignResult {
    std::vector<SolverCampaign> solvers;

    bool operator==(const CampaignResult&) const = default;
};

// Runs the campaign: trial t draws capacities with seed base_seed+t,
// runs every enabled solver (the heuristic reuses the trial seed),
// verifies each produced assignment, and aggregates.  Trials may run
// on `workers` threads; results are keyed by trial index and reduced
// in index order, so the outcome is identical for any worker count.
// A trial whose solver throws a domain error (the heuristic's
// InsufficientSubframes) is recorded as infeasible rather than fatal.
CampaignResult run_trials(const CampaignConfig& config);

// Serialized reports.  CSV: header plus one row per (solver, QoS
// group), rates in Mbps with 4 decimals.  JSON: the full nested
// result in bit/s, including per-trial records; per-trial elapsed is
// included only when include_timings is set so that reruns of the
// same campaign emit byte-identical documents.
std::string emit_report_csv(const CampaignResult& result);
std::string emit_report_json(const CampaignResult& result,
                             bool include_timings = false);
CampaignResult parse_report_json(const std::string& text);

// Boolean assignment matrix as CSV (one row per vehicle) and back.
std::string write_assignment_csv(const Assignment& assignment);
Assignment parse_assignment_csv(const std::string& text);

// Whole-file helpers; failures -> IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sidelink
