#include "groupmac/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace groupmac {

Clustering::Clustering(std::size_t n_sensors, int channels, std::vector<std::vector<SensorIndex>> clusters,
                       std::vector<MoveCode> assigned_moves)
    : n_sensors_(n_sensors), channels_(channels), clusters_(std::move(clusters)), moves_(std::move(assigned_moves)) {
    check_channels(channels);
    if (clusters_.size() > move_count(channels)) throw std::invalid_argument("more clusters than moves");
    if (moves_.size() != clusters_.size()) throw std::invalid_argument("need one move per cluster");
    std::vector<int> owner(n_sensors_, -1);
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        for (SensorIndex s : clusters_[c]) {
            if (s >= n_sensors_) throw std::invalid_argument("cluster member out of range");
            if (owner[s] != -1) throw std::invalid_argument("sensor " + std::to_string(s) + " in two clusters");
            owner[s] = static_cast<int>(c);
        }
    }
    if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
        throw std::invalid_argument("clusters do not cover every sensor");
    }
    auto sorted = moves_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("cluster moves must be distinct");
    }
    for (MoveCode m : moves_) {
        if (m >= move_count(channels)) throw std::invalid_argument("cluster move out of range");
    }
}

DeterministicStrategy Clustering::strategy() const {
    std::vector<MoveCode> codes(n_sensors_, 0);
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        for (SensorIndex s : clusters_[c]) codes[s] = moves_[c];
    }
    return {channels_, std::move(codes)};
}

double cluster_cost(const std::vector<SensorIndex>& cluster, const ConflictGraph& graph) {
    double total = 0.0;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        for (std::size_t j = i + 1; j < cluster.size(); ++j) total += graph.weight(cluster[i], cluster[j]);
    }
    return total;
}

double cluster_cost(const std::vector<SensorIndex>& cluster, const ActivationPmf& pmf) {
    return cluster_cost(cluster, build_conflict_graph(pmf));
}

namespace {

double affinity(const ConflictGraph& graph, SensorIndex s, const std::vector<SensorIndex>& group, SplitMetric metric) {
    const double total = graph.weight_to(s, group);
    if (metric == SplitMetric::total_cost) return total;
    const auto others = static_cast<double>(group.size() - static_cast<std::size_t>(
                                                               std::count(group.begin(), group.end(), s)));
    return others > 0 ? total / others : 0.0;
}

// Splits `cluster` in two; returns the splinter group. Members move one at a
// time, always the one whose cost to the rest most exceeds its cost to the
// splinter group, until no member gains by moving.
std::vector<SensorIndex> split(const ConflictGraph& graph, std::vector<SensorIndex>& cluster, SplitMetric metric) {
    std::size_t seed_pos = 0;
    double seed_cost = -1.0;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        const double c = affinity(graph, cluster[i], cluster, metric);
        if (c > seed_cost) {
            seed_cost = c;
            seed_pos = i;
        }
    }
    std::vector<SensorIndex> splinter{cluster[seed_pos]};
    cluster.erase(cluster.begin() + static_cast<std::ptrdiff_t>(seed_pos));

    constexpr double kMinGain = 1e-12;
    while (true) {
        std::size_t best_pos = cluster.size();
        double best_gain = kMinGain;
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            const double gain = affinity(graph, cluster[i], cluster, metric) -
                                affinity(graph, cluster[i], splinter, metric);
            if (gain > best_gain) {
                best_gain = gain;
                best_pos = i;
            }
        }
        if (best_pos == cluster.size()) break;
        splinter.push_back(cluster[best_pos]);
        cluster.erase(cluster.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }
    std::sort(splinter.begin(), splinter.end());
    return splinter;
}

}  // namespace

Clustering diana_partition(const ActivationPmf& pmf, int channels, const DianaOptions& options) {
    check_channels(channels);
    return diana_partition(pmf, channels, move_count(channels), options);
}

Clustering diana_partition(const ActivationPmf& pmf, int channels, std::size_t target_clusters,
                           const DianaOptions& options) {
    check_channels(channels);
    if (target_clusters < 1 || target_clusters > move_count(channels)) {
        throw std::invalid_argument("target cluster count must be in [1, 2^M]");
    }
    const ConflictGraph graph = build_conflict_graph(pmf);
    std::vector<std::vector<SensorIndex>> clusters(1);
    clusters[0].resize(pmf.n_sensors());
    std::iota(clusters[0].begin(), clusters[0].end(), SensorIndex{0});

    while (clusters.size() < target_clusters) {
        std::size_t worst = 0;
        double worst_cost = -1.0;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const double cost = cluster_cost(clusters[c], graph);
            if (cost > worst_cost) {
                worst_cost = cost;
                worst = c;
            }
        }
        if (worst_cost <= 0.0) break;
        auto splinter = split(graph, clusters[worst], options.metric);
        clusters.push_back(std::move(splinter));
    }

    // Descending cost (stable on creation order); the last one goes silent.
    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> costs(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) costs[c] = cluster_cost(clusters[c], graph);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] > costs[b]; });
    std::vector<std::vector<SensorIndex>> sorted_clusters;
    std::vector<MoveCode> moves;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        sorted_clusters.push_back(std::move(clusters[order[rank]]));
        moves.push_back(rank + 1 == order.size() ? 0 : static_cast<MoveCode>(rank + 1));
    }
    return {pmf.n_sensors(), channels, std::move(sorted_clusters), std::move(moves)};
}

double clustering_value(const Clustering& clustering, const ActivationPmf& pmf) {
    const ConflictGraph graph = build_conflict_graph(pmf);
    if (clustering.n_sensors() != pmf.n_sensors()) throw std::invalid_argument("clustering and pmf disagree on N");
    double failure = 0.0;
    for (const auto& cluster : clustering.clusters()) failure += cluster_cost(cluster, graph);
    return 1.0 - failure;
}

DeterministicStrategy greedy_assign(const ActivationPmf& pmf, int channels) {
    check_channels(channels);
    const std::size_t n = pmf.n_sensors();
    // Rounded so that marginals equal up to summation noise tie on index.
    auto marginal = pmf.marginals();
    for (double& m : marginal) m = std::round(m * 1e12);
    std::vector<SensorIndex> order(n);
    std::iota(order.begin(), order.end(), SensorIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](SensorIndex a, SensorIndex b) { return marginal[a] > marginal[b]; });

    // Sets touching each sensor; only those change when its move changes.
    std::vector<std::vector<std::size_t>> touching(n);
    for (std::size_t i = 0; i < pmf.support().size(); ++i) {
        for (SensorIndex s : pmf.support()[i].set) touching[s].push_back(i);
    }

    std::vector<MoveCode> codes(n, 0);
    for (SensorIndex sensor : order) {
        MoveCode best_move = 0;
        double best_value = -1.0;
        for (MoveCode m = 0; m < move_count(channels); ++m) {
            codes[sensor] = m;
            double value = 0.0;
            for (std::size_t i : touching[sensor]) {
                const auto& entry = pmf.support()[i];
                MoveCode once = 0;
                MoveCode twice = 0;
                for (SensorIndex s : entry.set) {
                    twice |= once & codes[s];
                    once |= codes[s];
                }
                if ((once & ~twice) != 0) value += entry.probability;
            }
            if (value > best_value + 1e-12) {
                best_value = value;
                best_move = m;
            }
        }
        codes[sensor] = best_move;
    }
    return {channels, std::move(codes)};
}

}  // namespace groupmac
