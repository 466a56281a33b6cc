#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "groupmac/activation.hpp"
#include "groupmac/bandit.hpp"
#include "groupmac/clustering.hpp"
#include "groupmac/exact_solver.hpp"
#include "groupmac/harness.hpp"

using namespace groupmac;

namespace {

// Scenario selection shared by every subcommand: a PMF file or a generator.
struct ScenarioFlags {
    std::string pmf;
    bool renormalize = false;
    std::string kind = "deterministic";
    std::size_t n = 10;
    std::size_t a = 2;
    std::uint64_t seed = 0;
    std::vector<double> table;

    void add(CLI::App& app, bool allow_file = true) {
        if (allow_file) {
            app.add_option("--pmf", pmf, "PMF file (overrides the generator flags)");
            app.add_flag("--renormalize", renormalize, "rescale a PMF file whose sum is off by more than 1e-6");
        }
        app.add_option("--kind", kind, "deterministic | regular | general")->capture_default_str();
        app.add_option("-n,--sensors", n, "number of sensors N")->capture_default_str();
        app.add_option("-a,--set-size", a, "active set size A")->capture_default_str();
        app.add_option("--scenario-seed", seed, "seed of the general generator")->capture_default_str();
        app.add_option("--distance-table", table, "regular kind: per-node pick probability for distances 1..N/2")
            ->delimiter(',');
    }

    ScenarioSpec spec() const { return {parse_scenario_kind(kind), n, a, seed, table}; }

    ActivationPmf load() const {
        if (!pmf.empty()) return read_pmf_file(pmf, {renormalize});
        return make_scenario(spec());
    }
};

struct MabFlags {
    TrainingConfig config;

    void add(CLI::App& app) {
        app.add_option("--max-rounds", config.max_rounds, "training rounds of N turns")->capture_default_str();
        app.add_option("--patience", config.patience, "stop after this many unchanged evaluations, 0 = never")
            ->capture_default_str();
        app.add_option("--eval-period", config.eval_period, "rounds between evaluations")->capture_default_str();
        app.add_option("--ack-loss", config.ack_loss_prob, "probability an acknowledgment is lost")
            ->capture_default_str();
        app.add_option("--beta", config.alpha_exponent, "learning rate exponent, alpha = k^-beta")
            ->capture_default_str();
        app.add_option("--window", config.moving_average_window, "moving average window in turns")
            ->capture_default_str();
    }
};

void print_strategy(const DeterministicStrategy& strategy, double value) {
    std::cout << "strategy: " << to_string(strategy) << '\n';
    std::cout.precision(17);
    std::cout << "value: " << value << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-message medium access: scenarios, solvers and experiments"};
    app.require_subcommand(1);

    // gen-scenario
    auto* gen = app.add_subcommand("gen-scenario", "write an activation PMF");
    ScenarioFlags gen_flags;
    std::string gen_out;
    gen_flags.add(*gen, false);
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");
    gen->callback([&] {
        const ActivationPmf pmf = make_scenario(gen_flags.spec());
        if (gen_out.empty()) {
            write_pmf(std::cout, pmf);
        } else {
            write_pmf_file(gen_out, pmf);
        }
    });

    // solve
    auto* solve = app.add_subcommand("solve", "run one deterministic solver");
    ScenarioFlags solve_flags;
    int solve_channels = 2;
    std::string solver_name = "exact";
    BruteForceOptions exact;
    bool no_symmetry = false;
    std::string metric = "total";
    solve_flags.add(*solve);
    solve->add_option("-m,--channels", solve_channels, "number of channels M")->capture_default_str();
    solve->add_option("--solver", solver_name, "exact | cluster | greedy")->capture_default_str();
    solve->add_option("--max-strategies", exact.max_strategies, "exact solver size guard")->capture_default_str();
    solve->add_flag("--no-symmetry", no_symmetry, "disable channel-symmetry pruning");
    solve->add_option("--workers", exact.workers, "exact solver threads")->capture_default_str();
    solve->add_option("--metric", metric, "cluster split metric: total | average")->capture_default_str();
    solve->callback([&] {
        const ActivationPmf pmf = solve_flags.load();
        exact.use_symmetry = !no_symmetry;
        switch (parse_solver(solver_name)) {
            case SolverKind::exact: {
                const auto result = brute_force_optimal(pmf, solve_channels, exact);
                print_strategy(result.strategy, result.value);
                break;
            }
            case SolverKind::cluster: {
                DianaOptions options;
                if (metric == "average") options.metric = SplitMetric::average_cost;
                else if (metric != "total") throw CLI::ValidationError("--metric", "must be total or average");
                const Clustering c = diana_partition(pmf, solve_channels, options);
                print_strategy(c.strategy(), clustering_value(c, pmf));
                break;
            }
            case SolverKind::greedy: {
                const auto strategy = greedy_assign(pmf, solve_channels);
                print_strategy(strategy, expected_success(strategy, pmf));
                break;
            }
            case SolverKind::mab:
                throw CLI::ValidationError("--solver", "use the train subcommand for the bandit");
        }
    });

    // train
    auto* train_cmd = app.add_subcommand("train", "train the distributed bandit");
    ScenarioFlags train_flags;
    MabFlags mab_flags;
    int train_channels = 2;
    std::uint64_t train_seed = 0;
    std::string curve_out;
    train_flags.add(*train_cmd);
    mab_flags.add(*train_cmd);
    train_cmd->add_option("-m,--channels", train_channels, "number of channels M")->capture_default_str();
    train_cmd->add_option("--seed", train_seed, "training seed")->capture_default_str();
    train_cmd->add_option("--curve", curve_out, "write the training curve CSV here");
    train_cmd->callback([&] {
        const ActivationPmf pmf = train_flags.load();
        const TrainResult result = train(pmf, train_channels, mab_flags.config, train_seed);
        print_strategy(result.strategy, expected_success(result.strategy, pmf));
        std::cout << "rounds: " << result.rounds << (result.stopped_early ? " (stable)" : "") << '\n';
        if (!curve_out.empty()) write_curve_csv_file(curve_out, result.curve);
    });

    // run
    auto* run = app.add_subcommand("run", "run a full experiment");
    std::string config_path;
    ScenarioFlags run_flags;
    MabFlags run_mab;
    std::optional<int> run_channels;
    std::string run_solvers;
    std::optional<std::size_t> replications;
    std::optional<std::uint64_t> run_seed;
    std::string output_dir;
    bool no_svg = false;
    std::optional<unsigned> run_workers;
    std::optional<double> run_max_strategies;
    bool run_no_symmetry = false;
    std::string run_metric;
    run->add_option("-c,--config", config_path, "experiment file; flags below override it")->check(CLI::ExistingFile);
    run_flags.add(*run);
    run_mab.add(*run);
    run->add_option("-m,--channels", run_channels, "number of channels M");
    run->add_option("--solvers", run_solvers, "comma separated subset of exact,cluster,greedy,mab");
    run->add_option("--replications", replications, "bandit replications");
    run->add_option("--seed", run_seed, "experiment seed");
    run->add_option("-o,--output-dir", output_dir, "output directory");
    run->add_flag("--no-svg", no_svg, "skip the SVG chart");
    run->add_option("--workers", run_workers, "worker threads");
    run->add_option("--max-strategies", run_max_strategies, "exact solver size guard");
    run->add_flag("--no-symmetry", run_no_symmetry, "disable channel-symmetry pruning");
    run->add_option("--metric", run_metric, "cluster split metric: total | average");
    run->callback([&] {
        ExperimentConfig config;
        if (!config_path.empty()) config = load_experiment_config(config_path);

        const bool generator_given = run->count("--kind") || run->count("--sensors") || run->count("--set-size") ||
                                     run->count("--scenario-seed") || run->count("--distance-table");
        if (!run_flags.pmf.empty()) {
            config.scenario.reset();
            config.pmf_path = run_flags.pmf;
            config.renormalize = run_flags.renormalize;
        } else if (generator_given || (!config.scenario && !config.pmf_path)) {
            ScenarioSpec spec = config.scenario.value_or(ScenarioSpec{});
            if (run->count("--kind")) spec.kind = parse_scenario_kind(run_flags.kind);
            if (run->count("--sensors")) spec.n_sensors = run_flags.n;
            if (run->count("--set-size")) spec.set_size = run_flags.a;
            if (run->count("--scenario-seed")) spec.seed = run_flags.seed;
            if (run->count("--distance-table")) spec.distance_table = run_flags.table;
            config.pmf_path.reset();
            config.scenario = spec;
        }
        if (run_channels) config.channels = *run_channels;
        if (!run_solvers.empty()) config.solvers = parse_solver_list(run_solvers);
        if (replications) config.replications = *replications;
        if (run_seed) config.seed = *run_seed;
        if (!output_dir.empty()) config.output_dir = output_dir;
        if (no_svg) config.emit_svg = false;
        if (run_workers) config.workers = *run_workers;
        if (run_max_strategies) config.exact.max_strategies = *run_max_strategies;
        if (run_no_symmetry) config.exact.use_symmetry = false;
        if (run_metric == "average") config.cluster.metric = SplitMetric::average_cost;
        else if (run_metric == "total") config.cluster.metric = SplitMetric::total_cost;
        else if (!run_metric.empty()) throw CLI::ValidationError("--metric", "must be total or average");

        TrainingConfig& mab = config.mab;
        if (run->count("--max-rounds")) mab.max_rounds = run_mab.config.max_rounds;
        if (run->count("--patience")) mab.patience = run_mab.config.patience;
        if (run->count("--eval-period")) mab.eval_period = run_mab.config.eval_period;
        if (run->count("--ack-loss")) mab.ack_loss_prob = run_mab.config.ack_loss_prob;
        if (run->count("--beta")) mab.alpha_exponent = run_mab.config.alpha_exponent;
        if (run->count("--window")) mab.moving_average_window = run_mab.config.moving_average_window;

        const ExperimentReport report = run_experiment(config);
        write_summary_csv(std::cout, report);
        std::cerr << "results in " << config.output_dir.string() << '\n';
    });

    // compare
    auto* compare = app.add_subcommand("compare", "compare exact optima of two scenarios");
    std::vector<std::string> compare_pmfs;
    ScenarioFlags compare_flags;
    std::vector<std::size_t> sizes{2, 3};
    int compare_channels = 2;
    BruteForceOptions compare_exact;
    compare->add_option("--pmf", compare_pmfs, "two PMF files")->expected(2);
    compare_flags.add(*compare, false);
    compare->add_option("--sizes", sizes, "two set sizes A for the generated scenario")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    compare->add_option("-m,--channels", compare_channels, "number of channels M")->capture_default_str();
    compare->add_option("--workers", compare_exact.workers, "exact solver threads")->capture_default_str();
    compare->callback([&] {
        std::optional<ActivationPmf> first;
        std::optional<ActivationPmf> second;
        std::string first_label;
        std::string second_label;
        if (!compare_pmfs.empty()) {
            first = read_pmf_file(compare_pmfs[0]);
            second = read_pmf_file(compare_pmfs[1]);
            first_label = compare_pmfs[0];
            second_label = compare_pmfs[1];
        } else {
            if (sizes.size() != 2) throw CLI::ValidationError("--sizes", "expects two values");
            ScenarioSpec spec = compare_flags.spec();
            spec.set_size = sizes[0];
            first = make_scenario(spec);
            first_label = to_string(spec.kind) + " A=" + std::to_string(sizes[0]);
            spec.set_size = sizes[1];
            second = make_scenario(spec);
            second_label = to_string(spec.kind) + " A=" + std::to_string(sizes[1]);
        }
        const OptimaComparison c = compare_optima(*first, *second, compare_channels, compare_exact);
        std::cout.precision(17);
        std::cout << first_label << ": " << c.first << '\n' << second_label << ": " << c.second << '\n';
        const char* relation = c.order == std::partial_ordering::less      ? "<"
                               : c.order == std::partial_ordering::greater ? ">"
                                                                            : "=";
        std::cout << "order: first " << relation << " second\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
