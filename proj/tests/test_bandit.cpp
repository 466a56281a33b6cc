#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "groupmac/activation.hpp"
#include "groupmac/bandit.hpp"
#include "groupmac/exact_solver.hpp"

using namespace groupmac;

TEST(QUpdate, FirstAndSecondVisit) {
    QTable q({0.5, 0.5});
    q = q_update(q, 1, 1);
    EXPECT_EQ(q.value(1), 1.0);
    EXPECT_EQ(q.visits(1), 1U);
    q = q_update(q, 1, 0);
    EXPECT_EQ(q.value(1), 0.5);
    EXPECT_EQ(q.visits(1), 2U);
    EXPECT_EQ(q.value(0), 0.5);
    EXPECT_EQ(q.visits(0), 0U);
}

TEST(QUpdate, ZeroRewardsDecreaseMonotonically) {
    QTable q({0.8, 0.3});
    q = q_update(q, 0, 1);
    double previous = q.value(0);
    for (int i = 0; i < 1000; ++i) {
        q = q_update(q, 0, 0);
        EXPECT_LE(q.value(0), previous);
        previous = q.value(0);
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(QUpdate, Errors) {
    EXPECT_THROW(q_update(QTable({0.1, 0.2}), 2, 1), std::out_of_range);
    EXPECT_THROW(q_update(QTable({0.1, 0.2}), 0, 2), std::invalid_argument);
    EXPECT_THROW(QTable({}), std::invalid_argument);
}

TEST(QUpdate, RunningMeanIdentity) {
    std::mt19937 gen(3);
    std::bernoulli_distribution coin(0.37);
    QTable q({0.9, 0.1, 0.4, 0.6});
    std::vector<std::vector<int>> log(4);
    std::uniform_int_distribution<MoveCode> arm(0, 3);
    for (int i = 0; i < 5000; ++i) {
        const MoveCode a = arm(gen);
        const int r = coin(gen);
        log[a].push_back(r);
        q = q_update(q, a, r);
    }
    for (MoveCode a = 0; a < 4; ++a) {
        ASSERT_FALSE(log[a].empty());
        double sum = 0.0;
        for (int r : log[a]) sum += r;
        EXPECT_NEAR(q.value(a), sum / static_cast<double>(log[a].size()), 1e-12);
        EXPECT_EQ(q.visits(a), log[a].size());
    }
}

TEST(QUpdate, StepSizeSchedule) {
    // partial sums of 1/k and 1/k^2 up to a million
    double harmonic = 0.0;
    double squares = 0.0;
    for (int k = 1; k <= 1000000; ++k) {
        const double alpha = 1.0 / k;
        harmonic += alpha;
        squares += alpha * alpha;
    }
    EXPECT_GT(harmonic, std::log(1e6));
    EXPECT_LT(squares, std::numbers::pi * std::numbers::pi / 6);

    // k-1 ones then a zero average to 1 - 1/k
    for (std::uint64_t k : {2ULL, 10ULL, 1000ULL}) {
        QTable q({0.0});
        for (std::uint64_t i = 1; i < k; ++i) q.update(0, 1.0);
        q.update(0, 0.0);
        EXPECT_NEAR(q.value(0), 1.0 - 1.0 / static_cast<double>(k), 1e-12);
    }

    QTable q({0.0});
    q.update(0, 1.0, 0.75);
    q.update(0, 0.0, 0.75);
    EXPECT_NEAR(q.value(0), 1.0 - std::pow(2.0, -0.75), 1e-15);
}

TEST(GreedyMove, TieBreaks) {
    EXPECT_EQ(greedy_move(QTable({0.2, 0.9, 0.1, 0.9})), 1U);
    EXPECT_EQ(greedy_move(QTable({0.4, 0.4, 0.4, 0.4})), 0U);
    EXPECT_EQ(greedy_move(QTable({0.1, 0.2, 0.3, 0.4})), 3U);
}

TEST(TrainingConfig, Validation) {
    TrainingConfig c;
    c.alpha_exponent = 0.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.alpha_exponent = 1.0;
    c.ack_loss_prob = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.ack_loss_prob = 0.0;
    c.max_rounds = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(TrainingRound, InitialState) {
    const auto state = TrainingState::initial(10, 2, {}, 1);
    ASSERT_EQ(state.q_tables.size(), 10U);
    for (const auto& q : state.q_tables) {
        ASSERT_EQ(q.arms(), 4U);
        for (double v : q.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_LT(v, 1.0);
        }
    }
}

TEST(TrainingRound, OnlyDesignatedSensorLearns) {
    const auto pmf = make_regular_circle(10, 3);
    auto state = TrainingState::initial(10, 2, {}, 5);
    int idle_turns = 0;
    for (int turn = 0; turn < 2000; ++turn) {
        const auto before = state.q_tables;
        const SensorIndex expected_designated = state.designated_cursor;
        const auto out = training_round(state, pmf);
        EXPECT_EQ(out.designated, expected_designated);
        EXPECT_EQ(state.designated_cursor, (expected_designated + 1) % 10);
        for (SensorIndex s = 0; s < 10; ++s) {
            const bool changed = before[s].visit_counts() != state.q_tables[s].visit_counts();
            EXPECT_EQ(changed, s == out.designated && out.designated_active);
            if (s != out.designated) { EXPECT_EQ(before[s].values(), state.q_tables[s].values()); }
        }
        if (!out.designated_active) {
            ++idle_turns;
            EXPECT_FALSE(out.explored_arm.has_value());
        }
    }
    EXPECT_GT(idle_turns, 0);
}

TEST(TrainingRound, SuccessMatchesPlayedMoves) {
    const auto pmf = make_general_random(8, 3, 4);
    auto state = TrainingState::initial(8, 2, {}, 6);
    for (int turn = 0; turn < 500; ++turn) {
        const auto profile = state.greedy_profile();
        const auto out = training_round(state, pmf);
        std::vector<MoveCode> played;
        for (SensorIndex s : out.active) {
            played.push_back(s == out.designated ? *out.explored_arm : profile.codes()[s]);
        }
        EXPECT_EQ(out.success, success_codes(played));
        if (out.designated_active) { EXPECT_EQ(out.observed_reward, out.success ? 1 : 0); }
    }
}

TEST(TrainingRound, DistinctMovesOnAPairSucceed) {
    const auto pmf = make_deterministic_partition(10, 2);
    auto state = TrainingState::initial(10, 2, {}, 8);
    state.q_tables[1] = QTable({1.0, 0.0, 0.0, 0.0});  // partner stays silent
    int checked = 0;
    for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
        auto trial = state;
        trial.rng = Rng(attempt);
        trial.designated_cursor = 0;
        const auto out = training_round(trial, pmf);
        if (!out.designated_active) continue;
        ++checked;
        EXPECT_EQ(out.success, *out.explored_arm != 0);
        EXPECT_EQ(out.observed_reward, out.success ? 1 : 0);
    }
    EXPECT_GT(checked, 10);
}

TEST(TrainingRound, LostAcknowledgmentsZeroTheValues) {
    const auto pmf = make_regular_circle(10, 2);
    TrainingConfig config;
    config.ack_loss_prob = 1.0;
    config.max_rounds = 2000;
    config.patience = 0;
    auto state = TrainingState::initial(10, 2, config, 2);
    for (int turn = 0; turn < 20000; ++turn) {
        const auto out = training_round(state, pmf);
        if (out.designated_active) { EXPECT_EQ(out.observed_reward, 0); }
    }
    for (const auto& q : state.q_tables) {
        for (MoveCode a = 0; a < q.arms(); ++a) {
            if (q.visits(a) > 0) { EXPECT_EQ(q.value(a), 0.0); }
        }
    }
    const auto result = train(pmf, 2, config, 2);
    ASSERT_GT(result.curve.size(), 300U);
    // with every arm at zero the greedy profile settles on silence
    EXPECT_EQ(result.curve.back().exact_success, 0.0);
    for (std::size_t i = 300; i < result.curve.size(); ++i) {
        EXPECT_EQ(result.curve[i].exact_success, result.curve.back().exact_success);
    }
}

TEST(Train, Reproducible) {
    const auto pmf = make_regular_circle(10, 2);
    TrainingConfig config;
    config.max_rounds = 300;
    const auto a = train(pmf, 2, config, 77);
    const auto b = train(pmf, 2, config, 77);
    EXPECT_EQ(a.strategy, b.strategy);
    ASSERT_EQ(a.curve.size(), b.curve.size());
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        EXPECT_EQ(a.curve[i].exact_success, b.curve[i].exact_success);
        EXPECT_EQ(a.curve[i].empirical_success, b.curve[i].empirical_success);
    }
}

TEST(Train, CurveInvariants) {
    for (std::size_t a : {2U, 3U}) {
        const auto pmf = make_regular_circle(10, a);
        const double best = brute_force_optimal(pmf, 2).value;
        TrainingConfig config;
        config.max_rounds = 400;
        config.eval_period = 3;
        config.patience = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto result = train(pmf, 2, config, seed);
            ASSERT_FALSE(result.curve.empty());
            for (std::size_t i = 0; i < result.curve.size(); ++i) {
                const auto& p = result.curve[i];
                EXPECT_EQ(p.round % 3, 0U);
                if (i) { EXPECT_GT(p.round, result.curve[i - 1].round); }
                EXPECT_GE(p.exact_success, 0.0);
                EXPECT_LE(p.exact_success, best + 1e-12);
                EXPECT_GE(p.empirical_success, 0.0);
                EXPECT_LE(p.empirical_success, 1.0);
            }
        }
    }
}

TEST(Train, QValuesStayInUnitInterval) {
    const auto pmf = make_general_random(10, 3, 2);
    TrainingConfig config;
    config.alpha_exponent = 0.6;
    auto state = TrainingState::initial(10, 2, config, 3);
    for (int turn = 0; turn < 50000; ++turn) training_round(state, pmf);
    for (const auto& q : state.q_tables) {
        for (double v : q.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Train, EarlyStopOnStableProfile) {
    const auto pmf = make_deterministic_partition(10, 2);
    TrainingConfig config;
    config.patience = 5;
    config.max_rounds = 5000;
    const auto result = train(pmf, 2, config, 1);
    EXPECT_TRUE(result.stopped_early);
    EXPECT_LT(result.rounds, 5000U);
    EXPECT_EQ(result.rounds, result.curve.back().round);
}

TEST(ConvergenceRound, FirstRoundOfFinalPlateau) {
    const TrainingCurve curve{{1, 0.5, 0}, {2, 1.0, 0}, {3, 0.8, 0}, {4, 1.0, 0}, {5, 1.0, 0}};
    EXPECT_EQ(convergence_round(curve, 1.0), 4U);
    EXPECT_FALSE(convergence_round(curve, 0.9).has_value());
}

TEST(CurveCsv, HeaderAndRows) {
    std::ostringstream out;
    write_curve_csv(out, {{1, 0.5, 0.25}, {2, 0.93, 1}});
    EXPECT_EQ(out.str(), "round,exact_success,empirical_success\n1,0.5,0.25\n2,0.93,1\n");
}
