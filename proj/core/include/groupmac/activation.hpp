#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "groupmac/model.hpp"

namespace groupmac {

enum class ScenarioKind { deterministic, regular, general };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(const std::string& text);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::deterministic;
    std::size_t n_sensors = 10;
    std::size_t set_size = 2;
    std::uint64_t seed = 0;  // general kind only
    // Per-node probability of the next pick at circular distance 1, 2, ...,
    // N/2 (regular kind). Empty selects the built-in table for N = 10.
    std::vector<double> distance_table;

    void validate() const;
};

ActivationPmf make_scenario(const ScenarioSpec& spec);

// Consecutive blocks {0..A-1}, {A..2A-1}, ... each with probability A/N.
ActivationPmf make_deterministic_partition(std::size_t n_sensors, std::size_t set_size);

// Per-node pick probabilities for distances 1..5 on a ring of ten sensors.
// The opposite node (distance 5) is never picked.
std::vector<double> default_distance_table();

// Circular-distance activation: first sensor uniform, each following sensor
// drawn by distance from the previous pick with already-picked sensors removed
// and the remaining weights renormalized. A must be 2 or 3; N even.
ActivationPmf make_regular_circle(std::size_t n_sensors, std::size_t set_size,
                                  const std::vector<double>& distance_table = {});

// All C(N, A) subsets, weights i.i.d. uniform on (0, 1] then normalized.
ActivationPmf make_general_random(std::size_t n_sensors, std::size_t set_size, std::uint64_t seed);

inline ActiveSet sample_active_set(const ActivationPmf& pmf, Rng& rng) { return pmf.sample(rng); }

// Text format:
//
//   # optional comments and blank lines
//   N=<int> M-independent
//   <i>,<j>,...<ws><probability>
//
// Indices must be strictly increasing within a line. Sums within 1e-6 of one
// are rescaled exactly to one; larger deviations are rejected unless
// `renormalize` is set.
struct PmfReadOptions {
    bool renormalize = false;
};

inline constexpr double kPmfFileSumTolerance = 1e-6;

void write_pmf(std::ostream& out, const ActivationPmf& pmf);
void write_pmf_file(const std::filesystem::path& path, const ActivationPmf& pmf);
ActivationPmf read_pmf(std::istream& in, PmfReadOptions options = {});
ActivationPmf read_pmf_file(const std::filesystem::path& path, PmfReadOptions options = {});

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace groupmac
