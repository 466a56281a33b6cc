#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "groupmac/activation.hpp"
#include "groupmac/bandit.hpp"
#include "groupmac/clustering.hpp"
#include "groupmac/exact_solver.hpp"

namespace groupmac {

enum class SolverKind { exact, cluster, greedy, mab };

std::string to_string(SolverKind solver);
SolverKind parse_solver(const std::string& text);
// Comma- or space-separated list, e.g. "exact, cluster, mab".
std::vector<SolverKind> parse_solver_list(const std::string& text);

struct ExperimentConfig {
    // Exactly one of these selects the activation distribution.
    std::optional<ScenarioSpec> scenario;
    std::optional<std::filesystem::path> pmf_path;
    bool renormalize = false;

    int channels = 2;
    std::vector<SolverKind> solvers{SolverKind::exact, SolverKind::cluster, SolverKind::greedy, SolverKind::mab};
    BruteForceOptions exact;
    DianaOptions cluster;
    TrainingConfig mab;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "results";
    bool emit_svg = true;
    unsigned workers = 1;

    void validate() const;
};

/// Reads the flat key-value experiment file:
///
///   [experiment]  channels, solvers, replications, seed, output_dir, svg, workers
///   [scenario]    kind, n, a, seed, distance_table   -- or --   pmf, renormalize
///   [exact]       max_strategies, symmetry
///   [cluster]     metric = total | average
///   [mab]         max_rounds, patience, eval_period, ack_loss_prob, beta, window
///
/// Unknown sections or keys are errors. Relative paths resolve against the
/// file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(std::istream& in, const std::filesystem::path& base_dir = {});

ActivationPmf load_scenario(const ExperimentConfig& config);

// Seed of MAB replication r.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication);

struct SolverRun {
    SolverKind solver;
    std::size_t replication;
    DeterministicStrategy strategy;
    double value;
    double wall_seconds;
    std::optional<TrainResult> training;
};

struct SummaryRow {
    SolverKind solver;
    std::size_t runs;
    double mean;
    double min;
    double max;
    // Gaps to the exact optimum; empty when the exact solver did not run.
    std::optional<double> mean_gap;
    std::optional<double> min_gap;
    std::optional<double> max_gap;
};

struct ExperimentReport {
    std::optional<double> exact_value;
    std::vector<SolverRun> runs;
    std::vector<SummaryRow> summary;
    std::vector<std::string> warnings;
};

/// Runs every selected solver and writes into output_dir:
///   scenario.pmf, results.csv, summary.csv, timings.csv,
///   curves/mab_rep<r>.csv (one per replication) and success.svg.
/// Everything except timings.csv is a pure function of the config.
/// Deterministic solvers run once; the bandit runs once per replication.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Pure part of run_experiment; writes nothing.
ExperimentReport solve_all(const ExperimentConfig& config, const ActivationPmf& pmf);

void write_results_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);

// Line chart of exact success vs training round: the replication-averaged
// bandit curve plus one flat line per deterministic solver.
void write_success_svg(std::ostream& out, const ExperimentReport& report, const std::string& title);

// Parses the space-separated move codes written in results.csv.
DeterministicStrategy parse_strategy(const std::string& codes, int channels);

struct OptimaComparison {
    double first;
    double second;
    std::partial_ordering order;  // first <=> second, ties within 1e-12
};

OptimaComparison compare_optima(const ActivationPmf& first, const ActivationPmf& second, int channels,
                                const BruteForceOptions& options = {});

}  // namespace groupmac
