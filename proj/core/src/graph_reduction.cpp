#include "groupmac/graph_reduction.hpp"

#include <stdexcept>
#include <string>

namespace groupmac {

ConflictGraph::ConflictGraph(std::size_t n_vertices) : n_(n_vertices), weights_(n_vertices * n_vertices, 0.0) {}

void ConflictGraph::set_weight(SensorIndex u, SensorIndex v, double w) {
    if (u >= n_ || v >= n_) throw std::out_of_range("conflict graph vertex out of range");
    if (u == v) throw std::invalid_argument("conflict graph has no self-loops");
    if (!(w >= 0.0)) throw std::invalid_argument("conflict graph weights must be nonnegative");
    weights_[u * n_ + v] = w;
    weights_[v * n_ + u] = w;
}

double ConflictGraph::weight_to(SensorIndex vertex, const std::vector<SensorIndex>& others) const {
    double total = 0.0;
    for (SensorIndex o : others) {
        if (o != vertex) total += weight(vertex, o);
    }
    return total;
}

double ConflictGraph::total_weight() const {
    double total = 0.0;
    for (std::size_t u = 0; u < n_; ++u) {
        for (std::size_t v = u + 1; v < n_; ++v) total += weights_[u * n_ + v];
    }
    return total;
}

Coloring::Coloring(std::vector<int> colors_in, int k_in) : colors(std::move(colors_in)), k(k_in) {
    if (k < 1) throw std::invalid_argument("coloring needs k >= 1");
    for (int c : colors) {
        if (c < 0 || c >= k) throw std::invalid_argument("color " + std::to_string(c) + " outside [0, k)");
    }
}

Coloring Coloring::from_strategy(const DeterministicStrategy& strategy) {
    std::vector<int> colors(strategy.codes().begin(), strategy.codes().end());
    return {std::move(colors), static_cast<int>(move_count(strategy.channels()))};
}

void require_pair_support(const ActivationPmf& pmf) {
    for (const auto& entry : pmf.support()) {
        if (entry.set.size() != 2) {
            throw std::invalid_argument("reduction defined for A=2 only; support contains " + to_string(entry.set));
        }
    }
}

ConflictGraph build_conflict_graph(const ActivationPmf& pmf) {
    require_pair_support(pmf);
    ConflictGraph graph(pmf.n_sensors());
    for (const auto& entry : pmf.support()) {
        graph.set_weight(entry.set.members()[0], entry.set.members()[1], entry.probability);
    }
    return graph;
}

double coloring_weight(const Coloring& coloring, const ConflictGraph& graph) {
    if (coloring.colors.size() != graph.size()) {
        throw std::invalid_argument("coloring has " + std::to_string(coloring.colors.size()) + " vertices, graph has " +
                                    std::to_string(graph.size()));
    }
    double total = 0.0;
    for (std::size_t u = 0; u < graph.size(); ++u) {
        for (std::size_t v = u + 1; v < graph.size(); ++v) {
            if (coloring.colors[u] == coloring.colors[v]) {
                total += graph.weight(static_cast<SensorIndex>(u), static_cast<SensorIndex>(v));
            }
        }
    }
    return total;
}

double strategy_failure_weight(const DeterministicStrategy& strategy, const ActivationPmf& pmf) {
    require_pair_support(pmf);
    if (strategy.n_sensors() != pmf.n_sensors()) throw std::invalid_argument("strategy and pmf disagree on N");
    double total = 0.0;
    for (const auto& entry : pmf.support()) {
        if (!success(strategy, entry.set)) total += entry.probability;
    }
    return total;
}

}  // namespace groupmac
