#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "groupmac/activation.hpp"
#include "groupmac/exact_solver.hpp"
#include "groupmac/graph_reduction.hpp"
#include "oracles.hpp"

using namespace groupmac;

TEST(ConflictGraph, Pairing) {
    const auto g = build_conflict_graph(make_deterministic_partition(10, 2));
    int edges = 0;
    for (SensorIndex u = 0; u < 10; ++u) {
        for (SensorIndex v = u + 1; v < 10; ++v) {
            if (g.weight(u, v) > 0) {
                ++edges;
                EXPECT_DOUBLE_EQ(g.weight(u, v), 0.2);
                EXPECT_EQ(v, u + 1);
            }
        }
    }
    EXPECT_EQ(edges, 5);
}

TEST(ConflictGraph, Regular) {
    const auto g = build_conflict_graph(make_regular_circle(10, 2));
    EXPECT_NEAR(g.weight(0, 1), 0.055, 1e-15);
    EXPECT_EQ(g.weight(1, 0), g.weight(0, 1));
    EXPECT_EQ(g.weight(0, 5), 0.0);
}

TEST(ConflictGraph, RequiresPairs) {
    EXPECT_THROW(build_conflict_graph(make_regular_circle(10, 3)), std::invalid_argument);
    EXPECT_THROW(build_conflict_graph(ActivationPmf(3, {{{0}, 0.5}, {{1, 2}, 0.5}})), std::invalid_argument);
}

TEST(ConflictGraph, RejectsSelfLoopsAndNegativeWeights) {
    ConflictGraph g(3);
    EXPECT_THROW(g.set_weight(1, 1, 0.1), std::invalid_argument);
    EXPECT_THROW(g.set_weight(0, 1, -0.1), std::invalid_argument);
}

TEST(ColoringWeight, WorkedExamples) {
    ConflictGraph two(2);
    two.set_weight(0, 1, 0.5);
    EXPECT_EQ(coloring_weight(Coloring({0, 0}, 1), two), 0.5);
    EXPECT_EQ(coloring_weight(Coloring({0, 1}, 2), two), 0.0);

    const auto five = build_conflict_graph(make_deterministic_partition(10, 2));
    EXPECT_NEAR(coloring_weight(Coloring(std::vector<int>(10, 0), 1), five), 1.0, 1e-15);
    EXPECT_EQ(coloring_weight(Coloring({0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 2), five), 0.0);
}

TEST(ColoringWeight, Errors) {
    ConflictGraph g(3);
    EXPECT_THROW(coloring_weight(Coloring({0, 1}, 2), g), std::invalid_argument);
    EXPECT_THROW(Coloring({0, 2}, 2), std::invalid_argument);
}

TEST(ColoringWeight, PermutationInvariant) {
    std::mt19937 gen(9);
    const auto g = build_conflict_graph(make_regular_circle(10, 2));
    std::uniform_int_distribution<int> color(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> colors(10);
        for (auto& c : colors) c = color(gen);
        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<int> relabelled(10);
        for (int i = 0; i < 10; ++i) relabelled[i] = perm[colors[i]];
        EXPECT_NEAR(coloring_weight(Coloring(colors, 4), g), coloring_weight(Coloring(relabelled, 4), g), 1e-15);
    }
}

TEST(FailureWeight, WorkedExamples) {
    const auto pairing = make_deterministic_partition(10, 2);
    EXPECT_EQ(strategy_failure_weight(DeterministicStrategy(2, {1, 0, 1, 0, 1, 0, 1, 0, 1, 0}), pairing), 0.0);
    EXPECT_NEAR(strategy_failure_weight(DeterministicStrategy::all_silent(10, 2), pairing), 1.0, 1e-15);
    EXPECT_THROW(strategy_failure_weight(DeterministicStrategy::all_silent(10, 2), make_regular_circle(10, 3)),
                 std::invalid_argument);
}

TEST(FailureWeight, PairFailsIffMovesEqual) {
    for (int m = 1; m <= 4; ++m) {
        for (MoveCode a = 0; a < move_count(m); ++a) {
            for (MoveCode b = 0; b < move_count(m); ++b) {
                const std::vector<std::vector<int>> moves{oracle::bits_of(a, m), oracle::bits_of(b, m)};
                EXPECT_EQ(!oracle::succeeds(moves), a == b);
            }
        }
    }
}

TEST(FailureWeight, EqualsInducedColoringExactly) {
    std::mt19937 gen(10);
    const auto pmf = make_regular_circle(10, 2);
    const auto g = build_conflict_graph(pmf);
    for (int trial = 0; trial < 100; ++trial) {
        const DeterministicStrategy x(2, oracle::random_codes(gen, 10, 2));
        EXPECT_EQ(strategy_failure_weight(x, pmf), coloring_weight(Coloring::from_strategy(x), g));
        EXPECT_NEAR(1.0 - expected_success(x, pmf), strategy_failure_weight(x, pmf), 1e-12);
    }
}

TEST(FailureWeight, MinimumMatchesExactOptimum) {
    std::mt19937 gen(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pmf = oracle::random_pmf(gen, 6, 2, 2, 12);
        const int m = 1 + trial % 2;
        double best = 2.0;
        const auto g = build_conflict_graph(pmf);
        std::vector<std::uint32_t> codes(6, 0);
        const std::uint32_t base = 1U << m;
        while (true) {
            best = std::min(best, coloring_weight(Coloring(std::vector<int>(codes.begin(), codes.end()),
                                                           static_cast<int>(base)),
                                                  g));
            std::size_t i = codes.size();
            bool done = false;
            while (i > 0) {
                --i;
                if (++codes[i] < base) break;
                codes[i] = 0;
                done = i == 0;
            }
            if (done) break;
        }
        EXPECT_NEAR(best, 1.0 - brute_force_optimal(pmf, m).value, 1e-12);
    }
}
