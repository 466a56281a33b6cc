#include "groupmac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

namespace groupmac {

void check_channels(int channels) {
    if (channels < 1 || channels > kMaxChannels) {
        throw std::invalid_argument("channel count must be in [1, " + std::to_string(kMaxChannels) +
                                    "], got " + std::to_string(channels));
    }
}

ChannelMove::ChannelMove(int channels, MoveCode code) : channels_(channels), code_(code) {
    check_channels(channels);
    if (code >= move_count(channels)) {
        throw std::invalid_argument("move code " + std::to_string(code) + " out of range for " +
                                    std::to_string(channels) + " channels");
    }
}

ChannelMove ChannelMove::from_bits(const std::vector<int>& bits) {
    check_channels(static_cast<int>(bits.size()));
    MoveCode code = 0;
    for (std::size_t m = 0; m < bits.size(); ++m) {
        if (bits[m] != 0 && bits[m] != 1) throw std::invalid_argument("move bits must be 0 or 1");
        code |= static_cast<MoveCode>(bits[m]) << m;
    }
    return {static_cast<int>(bits.size()), code};
}

std::vector<int> ChannelMove::bits() const {
    std::vector<int> out(channels_);
    for (int m = 0; m < channels_; ++m) out[m] = transmits_on(m) ? 1 : 0;
    return out;
}

ChannelMove ChannelMove::widened(int channels) const {
    if (channels < channels_) throw std::invalid_argument("cannot narrow a move");
    return {channels, code_};
}

ActiveSet::ActiveSet(std::vector<SensorIndex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw std::invalid_argument("active set has duplicate members");
    }
}

bool ActiveSet::contains(SensorIndex sensor) const {
    return std::binary_search(members_.begin(), members_.end(), sensor);
}

std::string to_string(const ActiveSet& set) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < set.size(); ++i) out << (i ? "," : "") << set.members()[i];
    out << '}';
    return out.str();
}

ActivationPmf::ActivationPmf(std::size_t n_sensors, std::vector<PmfEntry> support)
    : n_sensors_(n_sensors), support_(std::move(support)) {
    if (n_sensors_ == 0) throw std::invalid_argument("activation pmf needs at least one sensor");
    if (support_.empty()) throw std::invalid_argument("activation pmf has empty support");
    std::sort(support_.begin(), support_.end(), [](const PmfEntry& a, const PmfEntry& b) { return a.set < b.set; });
    double total = 0.0;
    cumulative_.reserve(support_.size());
    for (std::size_t i = 0; i < support_.size(); ++i) {
        const auto& entry = support_[i];
        if (entry.set.empty()) throw std::invalid_argument("active set in support is empty");
        if (entry.set.back() >= n_sensors_) {
            throw std::invalid_argument("sensor index out of range in " + to_string(entry.set));
        }
        if (!(entry.probability > 0.0) || !std::isfinite(entry.probability)) {
            throw std::invalid_argument("probability of " + to_string(entry.set) + " must be positive");
        }
        if (i > 0 && support_[i - 1].set == entry.set) {
            throw std::invalid_argument("duplicate active set " + to_string(entry.set));
        }
        total += entry.probability;
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "activation probabilities sum to " << total << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
}

ActivationPmf ActivationPmf::normalized(std::size_t n_sensors, std::vector<PmfEntry> support) {
    double total = 0.0;
    for (const auto& entry : support) total += entry.probability;
    if (!(total > 0.0)) throw std::invalid_argument("cannot normalize a pmf with zero total mass");
    for (auto& entry : support) entry.probability /= total;
    return {n_sensors, std::move(support)};
}

double ActivationPmf::probability(const ActiveSet& set) const {
    for (const auto& entry : support_) {
        if (entry.set == set) return entry.probability;
    }
    return 0.0;
}

std::vector<double> ActivationPmf::marginals() const {
    std::vector<double> out(n_sensors_, 0.0);
    for (const auto& entry : support_) {
        for (SensorIndex s : entry.set) out[s] += entry.probability;
    }
    return out;
}

std::size_t ActivationPmf::max_set_size() const {
    std::size_t out = 0;
    for (const auto& entry : support_) out = std::max(out, entry.set.size());
    return out;
}

bool ActivationPmf::all_sets_have_size(std::size_t size) const {
    return std::all_of(support_.begin(), support_.end(),
                       [size](const PmfEntry& e) { return e.set.size() == size; });
}

ActiveSet ActivationPmf::sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return support_[static_cast<std::size_t>(it - cumulative_.begin())].set;
}

DeterministicStrategy::DeterministicStrategy(int channels, std::vector<MoveCode> codes)
    : channels_(channels), codes_(std::move(codes)) {
    check_channels(channels);
    for (MoveCode c : codes_) {
        if (c >= move_count(channels)) {
            throw std::invalid_argument("move code " + std::to_string(c) + " out of range for " +
                                        std::to_string(channels) + " channels");
        }
    }
}

DeterministicStrategy::DeterministicStrategy(const std::vector<ChannelMove>& moves)
    : channels_(moves.empty() ? 1 : moves.front().channels()) {
    codes_.reserve(moves.size());
    for (const auto& m : moves) {
        if (m.channels() != channels_) throw std::invalid_argument("moves disagree on channel count");
        codes_.push_back(m.code());
    }
}

DeterministicStrategy DeterministicStrategy::widened(int channels) const {
    if (channels < channels_) throw std::invalid_argument("cannot narrow a strategy");
    return {channels, codes_};
}

std::string to_string(const DeterministicStrategy& strategy) {
    std::ostringstream out;
    for (std::size_t i = 0; i < strategy.n_sensors(); ++i) out << (i ? " " : "") << strategy.codes()[i];
    return out.str();
}

MixedStrategy::MixedStrategy(int channels, std::vector<std::vector<double>> rows)
    : channels_(channels), rows_(std::move(rows)) {
    check_channels(channels);
    const std::size_t width = move_count(channels);
    for (std::size_t n = 0; n < rows_.size(); ++n) {
        const auto& row = rows_[n];
        if (row.size() != width) {
            throw std::invalid_argument("strategy row " + std::to_string(n) + " has " + std::to_string(row.size()) +
                                        " entries, expected " + std::to_string(width));
        }
        double total = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) throw std::invalid_argument("strategy row " + std::to_string(n) + " has a negative entry");
            total += p;
        }
        if (std::abs(total - 1.0) > kRowTolerance) {
            throw std::invalid_argument("strategy row " + std::to_string(n) + " is not stochastic");
        }
    }
}

MixedStrategy MixedStrategy::point_mass(const DeterministicStrategy& strategy) {
    std::vector<std::vector<double>> rows(strategy.n_sensors(),
                                          std::vector<double>(move_count(strategy.channels()), 0.0));
    for (std::size_t n = 0; n < strategy.n_sensors(); ++n) rows[n][strategy.codes()[n]] = 1.0;
    return {strategy.channels(), std::move(rows)};
}

MoveCode MixedStrategy::sample_move(SensorIndex sensor, Rng& rng) const {
    const auto& row = rows_.at(sensor);
    const double u = rng.uniform();
    double acc = 0.0;
    MoveCode last_positive = 0;
    for (std::size_t code = 0; code < row.size(); ++code) {
        if (row[code] <= 0.0) continue;
        acc += row[code];
        last_positive = static_cast<MoveCode>(code);
        if (u < acc) return last_positive;
    }
    return last_positive;
}

MixedStrategy MixedStrategy::with_row(SensorIndex sensor, std::vector<double> row) const {
    auto rows = rows_;
    rows.at(sensor) = std::move(row);
    return {channels_, std::move(rows)};
}

bool success(const std::map<SensorIndex, ChannelMove>& moves, const ActiveSet& active) {
    MoveCode once = 0;
    MoveCode twice = 0;
    std::optional<int> channels;
    for (SensorIndex s : active) {
        auto it = moves.find(s);
        if (it == moves.end()) throw std::invalid_argument("no move given for active sensor " + std::to_string(s));
        if (channels && *channels != it->second.channels()) {
            throw std::invalid_argument("moves disagree on channel count");
        }
        channels = it->second.channels();
        const MoveCode c = it->second.code();
        twice |= once & c;
        once |= c;
    }
    return (once & ~twice) != 0;
}

namespace {

void check_sizes(std::size_t strategy_sensors, const ActivationPmf& pmf) {
    if (strategy_sensors != pmf.n_sensors()) {
        throw std::invalid_argument("strategy covers " + std::to_string(strategy_sensors) + " sensors, pmf covers " +
                                    std::to_string(pmf.n_sensors()));
    }
}

// Sum over every joint move of the active sensors, weighted by the product of
// their row entries. Zero-probability moves are skipped.
double set_success_mixed(const MixedStrategy& strategy, const ActiveSet& active) {
    const std::size_t width = move_count(strategy.channels());
    const auto& members = active.members();
    const std::size_t a = members.size();
    std::vector<MoveCode> codes(a, 0);
    std::vector<double> weight(a + 1, 1.0);
    double total = 0.0;

    // Depth-first over members; weight[i] is the product of the first i rows.
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (depth == a) {
            if (success_codes(codes)) total += weight[a];
            return;
        }
        const auto& row = strategy.row(members[depth]);
        for (std::size_t code = 0; code < width; ++code) {
            if (row[code] == 0.0) continue;
            codes[depth] = static_cast<MoveCode>(code);
            weight[depth + 1] = weight[depth] * row[code];
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);
    return total;
}

struct SuccessCount {
    std::size_t successes = 0;
    std::size_t samples = 0;
};

template <typename DrawOutcome>
MonteCarloEstimate run_monte_carlo(std::size_t n_samples, std::uint64_t seed, unsigned workers, DrawOutcome draw) {
    if (n_samples == 0) throw std::invalid_argument("monte carlo needs at least one sample");
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(n_samples)));
    std::vector<SuccessCount> counts(workers);
    auto job = [&](unsigned w) {
        Rng rng = Rng::derive(seed, w);
        const std::size_t share = n_samples / workers + (w < n_samples % workers ? 1 : 0);
        SuccessCount c;
        for (std::size_t i = 0; i < share; ++i) c.successes += draw(rng) ? 1 : 0;
        c.samples = share;
        counts[w] = c;
    };
    if (workers == 1) {
        job(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(job, w);
    }
    std::size_t successes = 0;
    for (const auto& c : counts) successes += c.successes;
    const double p = static_cast<double>(successes) / static_cast<double>(n_samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples)), n_samples};
}

}  // namespace

bool success(const DeterministicStrategy& strategy, const ActiveSet& active) {
    MoveCode once = 0;
    MoveCode twice = 0;
    for (SensorIndex s : active) {
        if (s >= strategy.n_sensors()) {
            throw std::invalid_argument("no move given for active sensor " + std::to_string(s));
        }
        const MoveCode c = strategy.codes()[s];
        twice |= once & c;
        once |= c;
    }
    return (once & ~twice) != 0;
}

double expected_success(const DeterministicStrategy& strategy, const ActivationPmf& pmf) {
    check_sizes(strategy.n_sensors(), pmf);
    double total = 0.0;
    for (const auto& entry : pmf.support()) {
        if (success(strategy, entry.set)) total += entry.probability;
    }
    return total;
}

double expected_success(const MixedStrategy& strategy, const ActivationPmf& pmf) {
    check_sizes(strategy.n_sensors(), pmf);
    double total = 0.0;
    for (const auto& entry : pmf.support()) total += entry.probability * set_success_mixed(strategy, entry.set);
    return total;
}

MonteCarloEstimate monte_carlo_success(const DeterministicStrategy& strategy, const ActivationPmf& pmf,
                                       std::size_t n_samples, std::uint64_t seed, unsigned workers) {
    check_sizes(strategy.n_sensors(), pmf);
    return run_monte_carlo(n_samples, seed, workers,
                           [&](Rng& rng) { return success(strategy, pmf.sample(rng)); });
}

MonteCarloEstimate monte_carlo_success(const MixedStrategy& strategy, const ActivationPmf& pmf,
                                       std::size_t n_samples, std::uint64_t seed, unsigned workers) {
    check_sizes(strategy.n_sensors(), pmf);
    return run_monte_carlo(n_samples, seed, workers, [&](Rng& rng) {
        const ActiveSet active = pmf.sample(rng);
        MoveCode once = 0;
        MoveCode twice = 0;
        for (SensorIndex s : active) {
            const MoveCode c = strategy.sample_move(s, rng);
            twice |= once & c;
            once |= c;
        }
        return (once & ~twice) != 0;
    });
}

}  // namespace groupmac
