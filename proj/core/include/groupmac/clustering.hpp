#pragma once

#include <vector>

#include "groupmac/graph_reduction.hpp"
#include "groupmac/model.hpp"

namespace groupmac {

/// Partition of the sensors into at most 2^M clusters, each bound to its own
/// move. Sensors in one cluster collide exactly when they are active together.
class Clustering {
public:
    Clustering(std::size_t n_sensors, int channels, std::vector<std::vector<SensorIndex>> clusters,
               std::vector<MoveCode> assigned_moves);

    int channels() const { return channels_; }
    std::size_t n_sensors() const { return n_sensors_; }
    const std::vector<std::vector<SensorIndex>>& clusters() const { return clusters_; }
    const std::vector<MoveCode>& assigned_moves() const { return moves_; }

    DeterministicStrategy strategy() const;

private:
    std::size_t n_sensors_;
    int channels_;
    std::vector<std::vector<SensorIndex>> clusters_;
    std::vector<MoveCode> moves_;
};

// Sum of co-activation probability over unordered pairs inside the cluster.
double cluster_cost(const std::vector<SensorIndex>& cluster, const ActivationPmf& pmf);
double cluster_cost(const std::vector<SensorIndex>& cluster, const ConflictGraph& graph);

enum class SplitMetric {
    total_cost,    // summed pairwise cost to each side
    average_cost,  // mean pairwise cost, as in textbook DIANA
};

struct DianaOptions {
    SplitMetric metric = SplitMetric::total_cost;
};

/// Divisive clustering on the conflict graph:
///   1. start with every sensor in one cluster;
///   2. pick the cluster with the largest cost;
///   3. split off its member with the largest cost to the rest;
///   4. repeatedly move the remaining member whose cost to the rest of the
///      original cluster most exceeds its cost to the new one, until no
///      member would lower its cost by moving (ties to the lower index);
///   5. repeat until `target_clusters` clusters exist or every cluster is free.
/// Clusters sorted by descending cost then take moves 1, 2, ...; the cheapest
/// cluster stays silent (move 0).
Clustering diana_partition(const ActivationPmf& pmf, int channels, const DianaOptions& options = {});
Clustering diana_partition(const ActivationPmf& pmf, int channels, std::size_t target_clusters,
                           const DianaOptions& options = {});

// 1 - sum of cluster costs; pair support only.
double clustering_value(const Clustering& clustering, const ActivationPmf& pmf);

/// Sequential heuristic for arbitrary supports. Sensors are visited in
/// descending marginal activation probability (ties by index) and each takes
/// the move maximizing expected success with unvisited sensors held silent
/// (ties by smallest encoding).
DeterministicStrategy greedy_assign(const ActivationPmf& pmf, int channels);

}  // namespace groupmac
