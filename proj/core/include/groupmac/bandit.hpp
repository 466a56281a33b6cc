#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "groupmac/model.hpp"
#include "groupmac/rng.hpp"

namespace groupmac {

/// Per-sensor action-value estimates over the 2^M moves, with visit counts.
class QTable {
public:
    explicit QTable(std::vector<double> values);

    std::size_t arms() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint64_t>& visit_counts() const { return counts_; }
    double value(MoveCode arm) const { return values_.at(arm); }
    std::uint64_t visits(MoveCode arm) const { return counts_.at(arm); }

    // Bumps the arm's visit count k, then Q <- (1 - a) Q + a * reward with
    // a = k^-alpha_exponent.
    void update(MoveCode arm, double reward, double alpha_exponent = 1.0);

    // Highest value, ties to the smallest encoding.
    MoveCode greedy_move() const;

private:
    std::vector<double> values_;
    std::vector<std::uint64_t> counts_;
};

QTable q_update(QTable q, MoveCode arm, int reward, double alpha_exponent = 1.0);
inline MoveCode greedy_move(const QTable& q) { return q.greedy_move(); }

struct TrainingConfig {
    double ack_loss_prob = 0.0;
    double alpha_exponent = 1.0;  // learning rate k^-beta, beta in (0.5, 1]
    // Units of rounds; one round is N turns, so every sensor is designated once.
    std::size_t eval_period = 1;
    std::size_t max_rounds = 5000;
    // Stop once the greedy profile is unchanged over this many consecutive
    // evaluations; 0 disables early stopping.
    std::size_t patience = 1000;
    std::size_t moving_average_window = 100;  // turns

    void validate() const;
};

struct TrainingState {
    int channels;
    std::vector<QTable> q_tables;
    std::uint64_t turn_index = 0;
    SensorIndex designated_cursor = 0;  // sensor designated on the next turn
    Rng rng;
    TrainingConfig config;
    std::deque<int> recent_successes;  // last moving_average_window turns

    // Q values i.i.d. uniform on [0, 1], drawn sensor by sensor.
    static TrainingState initial(std::size_t n_sensors, int channels, const TrainingConfig& config,
                                 std::uint64_t seed);

    DeterministicStrategy greedy_profile() const;
    double moving_average() const;
};

struct TurnOutcome {
    SensorIndex designated;
    ActiveSet active;
    bool designated_active;
    std::optional<MoveCode> explored_arm;
    bool success;
    int observed_reward;  // after ACK erasure; meaningful only when designated_active
};

/// One designated-sensor turn: sample the active set; the designated sensor,
/// if active, plays a uniform arm while the other active sensors play
/// greedily; only the designated sensor learns, from the shared ACK, which is
/// lost with probability ack_loss_prob.
TurnOutcome training_round(TrainingState& state, const ActivationPmf& pmf);

struct CurvePoint {
    std::size_t round;
    double exact_success;
    double empirical_success;
};

using TrainingCurve = std::vector<CurvePoint>;

struct TrainResult {
    DeterministicStrategy strategy;
    TrainingCurve curve;
    std::size_t rounds = 0;
    bool stopped_early = false;
};

TrainResult train(const ActivationPmf& pmf, int channels, const TrainingConfig& config, std::uint64_t seed);

// First evaluated round whose exact success is within `tolerance` of
// `target` and stays there for the rest of the curve.
std::optional<std::size_t> convergence_round(const TrainingCurve& curve, double target, double tolerance = 1e-12);

void write_curve_csv(std::ostream& out, const TrainingCurve& curve);
void write_curve_csv_file(const std::filesystem::path& path, const TrainingCurve& curve);

}  // namespace groupmac
