#include "groupmac/exact_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

namespace groupmac {

SearchOrder prune_by_sensor_symmetry(int channels) {
    check_channels(channels);
    SearchOrder order;
    for (int k = 0; k <= channels; ++k) order.first_sensor_moves.push_back((MoveCode{1} << k) - 1);
    return order;
}

SearchOrder unpruned_search_order(int channels) {
    check_channels(channels);
    SearchOrder order;
    for (MoveCode c = 0; c < move_count(channels); ++c) order.first_sensor_moves.push_back(c);
    return order;
}

double strategy_space_size(std::size_t n_sensors, int channels) {
    return std::pow(static_cast<double>(move_count(channels)), static_cast<double>(n_sensors));
}

namespace {

struct ScoredSet {
    std::vector<SensorIndex> members;
    double probability;
};

struct Search {
    std::size_t n;
    MoveCode width;
    double tie_tolerance;
    // sets_closing_at[s]: support sets whose largest member is s.
    std::vector<std::vector<ScoredSet>> sets_closing_at;

    struct Best {
        std::vector<MoveCode> codes;
        double value = -1.0;
    };

    double close_sensor(std::size_t sensor, const std::vector<MoveCode>& codes) const {
        double gained = 0.0;
        for (const auto& set : sets_closing_at[sensor]) {
            MoveCode once = 0;
            MoveCode twice = 0;
            for (SensorIndex s : set.members) {
                twice |= once & codes[s];
                once |= codes[s];
            }
            if ((once & ~twice) != 0) gained += set.probability;
        }
        return gained;
    }

    // Enumerates sensors from `depth` on, moves ascending, so the first
    // strategy to beat the incumbent is the lexicographically smallest.
    void run(std::size_t depth, double partial, std::vector<MoveCode>& codes, Best& best) const {
        if (depth == n) {
            if (partial > best.value + tie_tolerance) {
                best.value = partial;
                best.codes = codes;
            }
            return;
        }
        for (MoveCode c = 0; c < width; ++c) {
            codes[depth] = c;
            run(depth + 1, partial + close_sensor(depth, codes), codes, best);
        }
    }
};

}  // namespace

SolverResult brute_force_optimal(const ActivationPmf& pmf, int channels, const BruteForceOptions& options) {
    check_channels(channels);
    const std::size_t n = pmf.n_sensors();
    const double space = strategy_space_size(n, channels);
    if (space > options.max_strategies) {
        throw InstanceTooLarge("instance too large for brute force: (2^" + std::to_string(channels) + ")^" +
                               std::to_string(n) + " strategies exceeds the limit");
    }

    Search search{n, static_cast<MoveCode>(move_count(channels)), options.tie_tolerance, {}};
    search.sets_closing_at.resize(n);
    for (const auto& entry : pmf.support()) {
        search.sets_closing_at[entry.set.back()].push_back({entry.set.members(), entry.probability});
    }

    const SearchOrder order = options.use_symmetry ? prune_by_sensor_symmetry(channels) : unpruned_search_order(channels);
    // One task per first-sensor move; merging in task order reproduces the
    // sequential tie rule for any worker count.
    const std::size_t tasks = order.first_sensor_moves.size();
    std::vector<Search::Best> results(tasks);
    auto job = [&](std::size_t t) {
        std::vector<MoveCode> codes(n, 0);
        codes[0] = order.first_sensor_moves[t];
        search.run(1, search.close_sensor(0, codes), codes, results[t]);
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(tasks)));
    if (workers == 1) {
        for (std::size_t t = 0; t < tasks; ++t) job(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t t = next++; t < tasks; t = next++) job(t);
            });
        }
    }

    Search::Best best;
    for (auto& r : results) {
        if (r.value > best.value + options.tie_tolerance) best = std::move(r);
    }
    // Report the value in the evaluator's summation order so it compares
    // bit-for-bit with re-evaluations of the same strategy.
    DeterministicStrategy strategy(channels, std::move(best.codes));
    const double value = expected_success(strategy, pmf);
    return {std::move(strategy), value};
}

}  // namespace groupmac
