#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "groupmac/model.hpp"

namespace groupmac {

class InstanceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BruteForceOptions {
    // Refuse instances with more than this many strategies, (2^M)^N.
    double max_strategies = 4294967296.0;  // 2^32
    bool use_symmetry = true;
    unsigned workers = 1;
    // Strategies whose values differ by at most this are ties; the
    // lexicographically smaller encoding vector wins.
    double tie_tolerance = 1e-12;
};

struct SolverResult {
    DeterministicStrategy strategy;
    double value;
};

/// Restriction of the first enumerated sensor's moves. Channel labels are
/// interchangeable, so any strategy can be relabelled until sensor 0 plays a
/// move of the form 0...01...1; one representative per popcount suffices.
struct SearchOrder {
    std::vector<MoveCode> first_sensor_moves;
};

SearchOrder prune_by_sensor_symmetry(int channels);
SearchOrder unpruned_search_order(int channels);

double strategy_space_size(std::size_t n_sensors, int channels);

/// Exhaustive search over all deterministic strategies. Each support set is
/// scored once its highest-indexed member has a move, so partial sums are
/// shared along the enumeration tree.
SolverResult brute_force_optimal(const ActivationPmf& pmf, int channels, const BruteForceOptions& options = {});

}  // namespace groupmac
