#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "groupmac/rng.hpp"

namespace groupmac {

using SensorIndex = std::uint32_t;
using MoveCode = std::uint32_t;

// Largest channel count whose move space (2^M codes) we index with MoveCode.
inline constexpr int kMaxChannels = 16;

inline std::size_t move_count(int channels) { return std::size_t{1} << channels; }

void check_channels(int channels);

/// Transmission pattern of one sensor over M collision channels. Bit m of the
/// encoding set means "transmit on channel m"; encoding 0 is silence.
class ChannelMove {
public:
    ChannelMove(int channels, MoveCode code);

    static ChannelMove from_bits(const std::vector<int>& bits);
    static ChannelMove silent(int channels) { return {channels, 0}; }

    int channels() const { return channels_; }
    MoveCode code() const { return code_; }
    bool transmits_on(int channel) const { return (code_ >> channel) & 1U; }
    bool is_silent() const { return code_ == 0; }
    std::vector<int> bits() const;

    // Same bits on a wider channel set; the added channels stay silent.
    ChannelMove widened(int channels) const;

    friend bool operator==(const ChannelMove&, const ChannelMove&) = default;

private:
    int channels_;
    MoveCode code_;
};

/// Sorted, duplicate-free set of sensor indices.
class ActiveSet {
public:
    ActiveSet() = default;
    // Sorts the input; throws on duplicate members.
    explicit ActiveSet(std::vector<SensorIndex> members);
    ActiveSet(std::initializer_list<SensorIndex> members)
        : ActiveSet(std::vector<SensorIndex>(members)) {}

    const std::vector<SensorIndex>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(SensorIndex sensor) const;
    SensorIndex back() const { return members_.back(); }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    friend auto operator<=>(const ActiveSet&, const ActiveSet&) = default;

private:
    std::vector<SensorIndex> members_;
};

std::string to_string(const ActiveSet& set);

struct PmfEntry {
    ActiveSet set;
    double probability;
};

/// Distribution over active sets, stored as its (sparse) support in ascending
/// set order.
///
/// Construction validates the support: strictly positive probabilities that
/// sum to one within kSumTolerance, no duplicate or empty sets, and every
/// index below n_sensors. Immutable afterwards.
class ActivationPmf {
public:
    static constexpr double kSumTolerance = 1e-9;

    ActivationPmf(std::size_t n_sensors, std::vector<PmfEntry> support);

    // Rescales the probabilities to sum to one before validating.
    static ActivationPmf normalized(std::size_t n_sensors, std::vector<PmfEntry> support);

    std::size_t n_sensors() const { return n_sensors_; }
    const std::vector<PmfEntry>& support() const { return support_; }

    // 0 when the set is not in the support.
    double probability(const ActiveSet& set) const;

    // Probability that a given sensor is in the active set.
    std::vector<double> marginals() const;

    std::size_t max_set_size() const;
    bool all_sets_have_size(std::size_t size) const;

    ActiveSet sample(Rng& rng) const;

private:
    std::size_t n_sensors_;
    std::vector<PmfEntry> support_;
    std::vector<double> cumulative_;
};

/// One fixed move per sensor, played whenever that sensor is active.
class DeterministicStrategy {
public:
    DeterministicStrategy(int channels, std::vector<MoveCode> codes);
    DeterministicStrategy(const std::vector<ChannelMove>& moves);

    static DeterministicStrategy all_silent(std::size_t n_sensors, int channels) {
        return {channels, std::vector<MoveCode>(n_sensors, 0)};
    }

    int channels() const { return channels_; }
    std::size_t n_sensors() const { return codes_.size(); }
    const std::vector<MoveCode>& codes() const { return codes_; }
    ChannelMove move(SensorIndex sensor) const { return {channels_, codes_.at(sensor)}; }

    DeterministicStrategy widened(int channels) const;

    friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;

private:
    int channels_;
    std::vector<MoveCode> codes_;
};

std::string to_string(const DeterministicStrategy& strategy);

/// Row-stochastic N x 2^M matrix: entry (n, code) is the probability that
/// sensor n plays the move with that encoding.
class MixedStrategy {
public:
    static constexpr double kRowTolerance = 1e-9;

    MixedStrategy(int channels, std::vector<std::vector<double>> rows);

    static MixedStrategy point_mass(const DeterministicStrategy& strategy);

    int channels() const { return channels_; }
    std::size_t n_sensors() const { return rows_.size(); }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<double>& row(SensorIndex sensor) const { return rows_.at(sensor); }

    MoveCode sample_move(SensorIndex sensor, Rng& rng) const;

    // Copy with one sensor's row replaced (validated).
    MixedStrategy with_row(SensorIndex sensor, std::vector<double> row) const;

private:
    int channels_;
    std::vector<std::vector<double>> rows_;
};

/// Collision-channel predicate on raw encodings: true iff some channel carries
/// exactly one transmission.
inline bool success_codes(std::span<const MoveCode> codes) {
    MoveCode once = 0;
    MoveCode twice = 0;
    for (MoveCode c : codes) {
        twice |= once & c;
        once |= c;
    }
    return (once & ~twice) != 0;
}

// Throws std::invalid_argument when an active sensor has no move.
bool success(const std::map<SensorIndex, ChannelMove>& moves, const ActiveSet& active);
bool success(const DeterministicStrategy& strategy, const ActiveSet& active);

double expected_success(const DeterministicStrategy& strategy, const ActivationPmf& pmf);

// Only the rows of active sensors enter each term; inactive sensors are silent.
double expected_success(const MixedStrategy& strategy, const ActivationPmf& pmf);

struct MonteCarloEstimate {
    double estimate;
    double standard_error;
    std::size_t samples;
};

// Workers draw from Rng::derive(seed, worker) and their counts are summed, so
// the result depends on (seed, workers) but not on scheduling.
MonteCarloEstimate monte_carlo_success(const DeterministicStrategy& strategy, const ActivationPmf& pmf,
                                       std::size_t n_samples, std::uint64_t seed, unsigned workers = 1);
MonteCarloEstimate monte_carlo_success(const MixedStrategy& strategy, const ActivationPmf& pmf,
                                       std::size_t n_samples, std::uint64_t seed, unsigned workers = 1);

}  // namespace groupmac
