#include "groupmac/bandit.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "format.hpp"

namespace groupmac {

QTable::QTable(std::vector<double> values) : values_(std::move(values)), counts_(values_.size(), 0) {
    if (values_.empty()) throw std::invalid_argument("q table needs at least one arm");
}

void QTable::update(MoveCode arm, double reward, double alpha_exponent) {
    if (arm >= values_.size()) {
        throw std::out_of_range("arm " + std::to_string(arm) + " out of range for " + std::to_string(values_.size()) +
                                " arms");
    }
    const std::uint64_t k = ++counts_[arm];
    const double alpha = alpha_exponent == 1.0 ? 1.0 / static_cast<double>(k)
                                               : std::pow(static_cast<double>(k), -alpha_exponent);
    values_[arm] = (1.0 - alpha) * values_[arm] + alpha * reward;
}

MoveCode QTable::greedy_move() const {
    MoveCode best = 0;
    for (MoveCode a = 1; a < values_.size(); ++a) {
        if (values_[a] > values_[best]) best = a;
    }
    return best;
}

QTable q_update(QTable q, MoveCode arm, int reward, double alpha_exponent) {
    if (reward != 0 && reward != 1) throw std::invalid_argument("reward must be 0 or 1");
    q.update(arm, reward, alpha_exponent);
    return q;
}

void TrainingConfig::validate() const {
    if (!(ack_loss_prob >= 0.0 && ack_loss_prob <= 1.0)) throw std::invalid_argument("ack_loss_prob must be in [0, 1]");
    if (!(alpha_exponent > 0.5 && alpha_exponent <= 1.0)) {
        throw std::invalid_argument("alpha_exponent must be in (0.5, 1]");
    }
    if (eval_period < 1) throw std::invalid_argument("eval_period must be >= 1");
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
    if (moving_average_window < 1) throw std::invalid_argument("moving_average_window must be >= 1");
}

TrainingState TrainingState::initial(std::size_t n_sensors, int channels, const TrainingConfig& config,
                                     std::uint64_t seed) {
    check_channels(channels);
    config.validate();
    if (n_sensors == 0) throw std::invalid_argument("training needs at least one sensor");
    TrainingState state{channels, {}, 0, 0, Rng(seed), config, {}};
    state.q_tables.reserve(n_sensors);
    for (std::size_t n = 0; n < n_sensors; ++n) {
        std::vector<double> values(move_count(channels));
        for (double& v : values) v = state.rng.uniform();
        state.q_tables.emplace_back(std::move(values));
    }
    return state;
}

DeterministicStrategy TrainingState::greedy_profile() const {
    std::vector<MoveCode> codes;
    codes.reserve(q_tables.size());
    for (const auto& q : q_tables) codes.push_back(q.greedy_move());
    return {channels, std::move(codes)};
}

double TrainingState::moving_average() const {
    if (recent_successes.empty()) return 0.0;
    double total = 0.0;
    for (int s : recent_successes) total += s;
    return total / static_cast<double>(recent_successes.size());
}

TurnOutcome training_round(TrainingState& state, const ActivationPmf& pmf) {
    const std::size_t n = state.q_tables.size();
    if (pmf.n_sensors() != n) throw std::invalid_argument("training state and pmf disagree on N");

    const SensorIndex designated = state.designated_cursor;
    state.designated_cursor = static_cast<SensorIndex>((designated + 1) % n);
    ++state.turn_index;

    TurnOutcome out{designated, pmf.sample(state.rng), false, std::nullopt, false, 0};
    out.designated_active = out.active.contains(designated);

    MoveCode once = 0;
    MoveCode twice = 0;
    for (SensorIndex s : out.active) {
        MoveCode c;
        if (s == designated) {
            c = static_cast<MoveCode>(state.rng.below(move_count(state.channels)));
            out.explored_arm = c;
        } else {
            c = state.q_tables[s].greedy_move();
        }
        twice |= once & c;
        once |= c;
    }
    out.success = (once & ~twice) != 0;

    if (out.designated_active) {
        const bool ack_lost = state.rng.bernoulli(state.config.ack_loss_prob);
        out.observed_reward = out.success && !ack_lost ? 1 : 0;
        state.q_tables[designated].update(*out.explored_arm, out.observed_reward, state.config.alpha_exponent);
    }

    state.recent_successes.push_back(out.success ? 1 : 0);
    if (state.recent_successes.size() > state.config.moving_average_window) state.recent_successes.pop_front();
    return out;
}

TrainResult train(const ActivationPmf& pmf, int channels, const TrainingConfig& config, std::uint64_t seed) {
    TrainingState state = TrainingState::initial(pmf.n_sensors(), channels, config, seed);
    const std::size_t n = pmf.n_sensors();

    TrainResult result{state.greedy_profile(), {}, 0, false};
    std::optional<DeterministicStrategy> last_profile;
    std::size_t unchanged = 0;
    for (std::size_t round = 1; round <= config.max_rounds; ++round) {
        for (std::size_t turn = 0; turn < n; ++turn) training_round(state, pmf);
        result.rounds = round;
        if (round % config.eval_period != 0) continue;

        DeterministicStrategy profile = state.greedy_profile();
        result.curve.push_back({round, expected_success(profile, pmf), state.moving_average()});
        unchanged = last_profile && *last_profile == profile ? unchanged + 1 : 0;
        last_profile = std::move(profile);
        if (config.patience > 0 && unchanged >= config.patience) {
            result.stopped_early = true;
            break;
        }
    }
    result.strategy = state.greedy_profile();
    return result;
}

std::optional<std::size_t> convergence_round(const TrainingCurve& curve, double target, double tolerance) {
    std::optional<std::size_t> first;
    for (const auto& point : curve) {
        if (std::abs(point.exact_success - target) <= tolerance) {
            if (!first) first = point.round;
        } else {
            first.reset();
        }
    }
    return first;
}

void write_curve_csv(std::ostream& out, const TrainingCurve& curve) {
    out << "round,exact_success,empirical_success\n";
    for (const auto& p : curve) {
        out << p.round << ',' << detail::format_double(p.exact_success) << ','
            << detail::format_double(p.empirical_success) << '\n';
    }
}

void write_curve_csv_file(const std::filesystem::path& path, const TrainingCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_curve_csv(out, curve);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace groupmac
