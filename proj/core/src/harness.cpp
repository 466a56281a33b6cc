#include "groupmac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "format.hpp"

namespace groupmac {

std::string to_string(SolverKind solver) {
    switch (solver) {
        case SolverKind::exact: return "exact";
        case SolverKind::cluster: return "cluster";
        case SolverKind::greedy: return "greedy";
        case SolverKind::mab: return "mab";
    }
    return "unknown";
}

SolverKind parse_solver(const std::string& text) {
    if (text == "exact") return SolverKind::exact;
    if (text == "cluster") return SolverKind::cluster;
    if (text == "greedy") return SolverKind::greedy;
    if (text == "mab") return SolverKind::mab;
    throw std::invalid_argument("unknown solver '" + text + "'");
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw std::invalid_argument("bad boolean for " + key + ": '" + text + "'");
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<SolverKind> parse_solver_list(const std::string& text) {
    std::vector<SolverKind> out;
    for (const auto& name : split_list(text)) {
        const SolverKind s = parse_solver(name);
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (scenario.has_value() == pmf_path.has_value()) {
        throw std::invalid_argument("experiment needs exactly one of a generated scenario or a pmf file");
    }
    if (scenario) scenario->validate();
    check_channels(channels);
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (solvers.empty()) throw std::invalid_argument("select at least one solver");
    mab.validate();
}

ExperimentConfig parse_experiment_config(std::istream& in, const std::filesystem::path& base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    ExperimentConfig config;
    ScenarioSpec spec;
    bool has_spec_keys = false;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };

    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw std::invalid_argument("config: key '" + section + "' outside a section");
        for (const auto& [key, node] : body) {
            const std::string name = section + "." + key;
            const std::string value = node.data();
            if (section == "experiment") {
                if (key == "channels") config.channels = parse_value<int>(name, value);
                else if (key == "solvers") config.solvers = parse_solver_list(value);
                else if (key == "replications") config.replications = parse_value<std::size_t>(name, value);
                else if (key == "seed") config.seed = parse_value<std::uint64_t>(name, value);
                else if (key == "output_dir") config.output_dir = resolve(value);
                else if (key == "svg") config.emit_svg = parse_bool(name, value);
                else if (key == "workers") config.workers = parse_value<unsigned>(name, value);
                else throw std::invalid_argument("config: unknown key " + name);
            } else if (section == "scenario") {
                if (key == "pmf") {
                    config.pmf_path = resolve(value);
                } else if (key == "renormalize") {
                    config.renormalize = parse_bool(name, value);
                } else {
                    has_spec_keys = true;
                    if (key == "kind") spec.kind = parse_scenario_kind(value);
                    else if (key == "n") spec.n_sensors = parse_value<std::size_t>(name, value);
                    else if (key == "a") spec.set_size = parse_value<std::size_t>(name, value);
                    else if (key == "seed") spec.seed = parse_value<std::uint64_t>(name, value);
                    else if (key == "distance_table") {
                        spec.distance_table.clear();
                        for (const auto& item : split_list(value)) spec.distance_table.push_back(parse_value<double>(name, item));
                    } else {
                        throw std::invalid_argument("config: unknown key " + name);
                    }
                }
            } else if (section == "exact") {
                if (key == "max_strategies") config.exact.max_strategies = parse_value<double>(name, value);
                else if (key == "symmetry") config.exact.use_symmetry = parse_bool(name, value);
                else throw std::invalid_argument("config: unknown key " + name);
            } else if (section == "cluster") {
                if (key == "metric") {
                    if (value == "total") config.cluster.metric = SplitMetric::total_cost;
                    else if (value == "average") config.cluster.metric = SplitMetric::average_cost;
                    else throw std::invalid_argument("config: cluster.metric must be total or average");
                } else {
                    throw std::invalid_argument("config: unknown key " + name);
                }
            } else if (section == "mab") {
                if (key == "max_rounds") config.mab.max_rounds = parse_value<std::size_t>(name, value);
                else if (key == "patience") config.mab.patience = parse_value<std::size_t>(name, value);
                else if (key == "eval_period") config.mab.eval_period = parse_value<std::size_t>(name, value);
                else if (key == "ack_loss_prob") config.mab.ack_loss_prob = parse_value<double>(name, value);
                else if (key == "beta") config.mab.alpha_exponent = parse_value<double>(name, value);
                else if (key == "window") config.mab.moving_average_window = parse_value<std::size_t>(name, value);
                else throw std::invalid_argument("config: unknown key " + name);
            } else {
                throw std::invalid_argument("config: unknown section [" + section + "]");
            }
        }
    }
    if (has_spec_keys) config.scenario = spec;
    config.validate();
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    return parse_experiment_config(in, path.parent_path());
}

ActivationPmf load_scenario(const ExperimentConfig& config) {
    if (config.pmf_path) return read_pmf_file(*config.pmf_path, {config.renormalize});
    if (!config.scenario) throw std::invalid_argument("experiment has no scenario");
    return make_scenario(*config.scenario);
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication) {
    return Rng::derive(seed, replication).next();
}

ExperimentReport solve_all(const ExperimentConfig& config, const ActivationPmf& pmf) {
    config.validate();
    ExperimentReport report;
    const int m = config.channels;
    auto has = [&](SolverKind s) {
        return std::find(config.solvers.begin(), config.solvers.end(), s) != config.solvers.end();
    };

    if (has(SolverKind::exact)) {
        const auto start = std::chrono::steady_clock::now();
        try {
            BruteForceOptions options = config.exact;
            options.workers = config.workers;
            auto result = brute_force_optimal(pmf, m, options);
            report.exact_value = result.value;
            report.runs.push_back({SolverKind::exact, 0, std::move(result.strategy), result.value,
                                   elapsed_since(start), std::nullopt});
        } catch (const InstanceTooLarge& e) {
            report.warnings.push_back(std::string("exact solver skipped: ") + e.what());
        }
    }
    if (has(SolverKind::cluster)) {
        if (pmf.all_sets_have_size(2)) {
            const auto start = std::chrono::steady_clock::now();
            const Clustering clustering = diana_partition(pmf, m, config.cluster);
            report.runs.push_back({SolverKind::cluster, 0, clustering.strategy(), clustering_value(clustering, pmf),
                                   elapsed_since(start), std::nullopt});
        } else {
            report.warnings.push_back("cluster solver skipped: it needs every active set to be a pair");
        }
    }
    if (has(SolverKind::greedy)) {
        const auto start = std::chrono::steady_clock::now();
        auto strategy = greedy_assign(pmf, m);
        const double value = expected_success(strategy, pmf);
        report.runs.push_back({SolverKind::greedy, 0, std::move(strategy), value, elapsed_since(start), std::nullopt});
    }
    if (has(SolverKind::mab)) {
        std::vector<std::optional<SolverRun>> runs(config.replications);
        auto job = [&](std::size_t r) {
            const auto start = std::chrono::steady_clock::now();
            TrainResult trained = train(pmf, m, config.mab, replication_seed(config.seed, r));
            const double value = expected_success(trained.strategy, pmf);
            runs[r] = SolverRun{SolverKind::mab, r, trained.strategy, value, elapsed_since(start), std::move(trained)};
        };
        const unsigned workers =
            std::max(1U, std::min<unsigned>(config.workers, static_cast<unsigned>(config.replications)));
        if (workers == 1) {
            for (std::size_t r = 0; r < config.replications; ++r) job(r);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> threads;
            for (unsigned w = 0; w < workers; ++w) {
                threads.emplace_back([&] {
                    for (std::size_t r = next++; r < config.replications; r = next++) job(r);
                });
            }
        }
        for (auto& run : runs) report.runs.push_back(std::move(*run));
    }

    for (SolverKind solver : config.solvers) {
        std::vector<double> values;
        for (const auto& run : report.runs) {
            if (run.solver == solver) values.push_back(run.value);
        }
        if (values.empty()) continue;
        SummaryRow row{solver, values.size(), 0.0, *std::min_element(values.begin(), values.end()),
                       *std::max_element(values.begin(), values.end()), std::nullopt, std::nullopt, std::nullopt};
        for (double v : values) row.mean += v;
        row.mean /= static_cast<double>(values.size());
        if (report.exact_value) {
            // Equal strategies summed over different failure sets can differ
            // in the last bits; treat those as ties like the exact solver does.
            auto gap = [&](double v) {
                const double g = *report.exact_value - v;
                return std::abs(g) <= config.exact.tie_tolerance ? 0.0 : g;
            };
            row.mean_gap = gap(row.mean);
            row.min_gap = gap(row.max);
            row.max_gap = gap(row.min);
        }
        report.summary.push_back(row);
    }
    return report;
}

void write_results_csv(std::ostream& out, const ExperimentReport& report) {
    out << "solver,replication,value,strategy\n";
    for (const auto& run : report.runs) {
        out << to_string(run.solver) << ',' << run.replication << ',' << detail::format_double(run.value) << ','
            << to_string(run.strategy) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
    auto opt = [](const std::optional<double>& v) { return v ? detail::format_double(*v) : std::string(); };
    out << "solver,runs,mean,min,max,mean_gap,min_gap,max_gap\n";
    for (const auto& row : report.summary) {
        out << to_string(row.solver) << ',' << row.runs << ',' << detail::format_double(row.mean) << ','
            << detail::format_double(row.min) << ',' << detail::format_double(row.max) << ',' << opt(row.mean_gap)
            << ',' << opt(row.min_gap) << ',' << opt(row.max_gap) << '\n';
    }
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    writer(out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const ActivationPmf pmf = load_scenario(config);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir / "curves", ec);
    if (ec) throw std::runtime_error("cannot create output directory " + config.output_dir.string() + ": " + ec.message());

    ExperimentReport report = solve_all(config, pmf);
    for (const auto& warning : report.warnings) std::cerr << "warning: " << warning << '\n';

    write_pmf_file(config.output_dir / "scenario.pmf", pmf);
    write_file(config.output_dir / "results.csv", [&](std::ostream& out) { write_results_csv(out, report); });
    write_file(config.output_dir / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, report); });
    write_file(config.output_dir / "timings.csv", [&](std::ostream& out) {
        out << "solver,replication,wall_seconds\n";
        for (const auto& run : report.runs) {
            out << to_string(run.solver) << ',' << run.replication << ',' << run.wall_seconds << '\n';
        }
    });
    for (const auto& run : report.runs) {
        if (!run.training) continue;
        write_curve_csv_file(config.output_dir / "curves" / ("mab_rep" + std::to_string(run.replication) + ".csv"),
                             run.training->curve);
    }
    if (config.emit_svg) {
        std::string title = "Success rate, M=" + std::to_string(config.channels);
        if (config.scenario) {
            title += ", " + to_string(config.scenario->kind) + " N=" + std::to_string(config.scenario->n_sensors) +
                     " A=" + std::to_string(config.scenario->set_size);
        }
        write_file(config.output_dir / "success.svg",
                   [&](std::ostream& out) { write_success_svg(out, report, title); });
    }
    return report;
}

DeterministicStrategy parse_strategy(const std::string& codes, int channels) {
    std::vector<MoveCode> out;
    for (const auto& item : split_list(codes)) out.push_back(parse_value<MoveCode>("strategy", item));
    return {channels, std::move(out)};
}

OptimaComparison compare_optima(const ActivationPmf& first, const ActivationPmf& second, int channels,
                                const BruteForceOptions& options) {
    const double a = brute_force_optimal(first, channels, options).value;
    const double b = brute_force_optimal(second, channels, options).value;
    std::partial_ordering order = std::abs(a - b) <= 1e-12 ? std::partial_ordering::equivalent : a <=> b;
    return {a, b, order};
}

}  // namespace groupmac
