#pragma once

#include <vector>

#include "groupmac/model.hpp"

namespace groupmac {

/// Complete weighted graph on the sensors; w(u, v) is the probability that
/// exactly {u, v} is the active set. Symmetric, zero diagonal.
class ConflictGraph {
public:
    explicit ConflictGraph(std::size_t n_vertices);

    std::size_t size() const { return n_; }
    double weight(SensorIndex u, SensorIndex v) const { return weights_[u * n_ + v]; }
    // Throws on self-loops and negative weights.
    void set_weight(SensorIndex u, SensorIndex v, double w);

    // Sum of weights between `vertex` and each member of `others` (vertex
    // itself is skipped if present).
    double weight_to(SensorIndex vertex, const std::vector<SensorIndex>& others) const;
    double total_weight() const;

private:
    std::size_t n_;
    std::vector<double> weights_;
};

struct Coloring {
    std::vector<int> colors;
    int k;

    Coloring(std::vector<int> colors, int k);
    static Coloring from_strategy(const DeterministicStrategy& strategy);
};

// Throws unless every support set is a pair.
void require_pair_support(const ActivationPmf& pmf);

ConflictGraph build_conflict_graph(const ActivationPmf& pmf);

// Total weight of monochromatic edges, each unordered edge once.
double coloring_weight(const Coloring& coloring, const ConflictGraph& graph);

// Probability mass of pairs on which the strategy fails; equals
// 1 - expected_success(strategy, pmf).
double strategy_failure_weight(const DeterministicStrategy& strategy, const ActivationPmf& pmf);

}  // namespace groupmac
