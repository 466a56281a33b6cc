#include "groupmac/activation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>

#include "format.hpp"

namespace groupmac {

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::deterministic: return "deterministic";
        case ScenarioKind::regular: return "regular";
        case ScenarioKind::general: return "general";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& text) {
    if (text == "deterministic") return ScenarioKind::deterministic;
    if (text == "regular") return ScenarioKind::regular;
    if (text == "general") return ScenarioKind::general;
    throw std::invalid_argument("unknown scenario kind '" + text + "'");
}

void ScenarioSpec::validate() const {
    if (n_sensors < 2) throw std::invalid_argument("scenario needs at least 2 sensors");
    if (set_size < 2 || set_size > n_sensors) {
        throw std::invalid_argument("active set size must be in [2, N], got " + std::to_string(set_size));
    }
    if (kind == ScenarioKind::deterministic && n_sensors % set_size != 0) {
        throw std::invalid_argument("deterministic scenario needs A to divide N");
    }
}

ActivationPmf make_scenario(const ScenarioSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case ScenarioKind::deterministic: return make_deterministic_partition(spec.n_sensors, spec.set_size);
        case ScenarioKind::regular: return make_regular_circle(spec.n_sensors, spec.set_size, spec.distance_table);
        case ScenarioKind::general: return make_general_random(spec.n_sensors, spec.set_size, spec.seed);
    }
    throw std::invalid_argument("unknown scenario kind");
}

ActivationPmf make_deterministic_partition(std::size_t n_sensors, std::size_t set_size) {
    if (set_size == 0 || n_sensors == 0 || n_sensors % set_size != 0) {
        throw std::invalid_argument("deterministic partition needs A to divide N (N=" + std::to_string(n_sensors) +
                                    ", A=" + std::to_string(set_size) + ")");
    }
    const std::size_t blocks = n_sensors / set_size;
    std::vector<PmfEntry> support;
    support.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::vector<SensorIndex> members(set_size);
        for (std::size_t i = 0; i < set_size; ++i) members[i] = static_cast<SensorIndex>(b * set_size + i);
        support.push_back({ActiveSet(std::move(members)), 1.0 / static_cast<double>(blocks)});
    }
    return {n_sensors, std::move(support)};
}

std::vector<double> default_distance_table() { return {0.275, 0.125, 0.075, 0.025, 0.0}; }

ActivationPmf make_regular_circle(std::size_t n_sensors, std::size_t set_size,
                                  const std::vector<double>& distance_table) {
    if (set_size != 2 && set_size != 3) throw std::invalid_argument("regular scenario supports A = 2 or 3 only");
    if (n_sensors < 4 || n_sensors % 2 != 0) throw std::invalid_argument("regular scenario needs an even N >= 4");
    std::vector<double> table = distance_table;
    if (table.empty()) {
        if (n_sensors != 10) {
            throw std::invalid_argument("built-in distance table covers N = 10 only; supply one for N = " +
                                        std::to_string(n_sensors));
        }
        table = default_distance_table();
    }
    const std::size_t half = n_sensors / 2;
    if (table.size() != half) {
        throw std::invalid_argument("distance table needs N/2 = " + std::to_string(half) + " entries");
    }
    double ring_total = 0.0;
    for (std::size_t d = 1; d <= half; ++d) {
        if (!(table[d - 1] >= 0.0)) throw std::invalid_argument("distance table entries must be nonnegative");
        ring_total += (d == half ? 1.0 : 2.0) * table[d - 1];
    }
    if (std::abs(ring_total - 1.0) > ActivationPmf::kSumTolerance) {
        throw std::invalid_argument("distance table does not sum to 1 over the ring");
    }

    const auto n = static_cast<long>(n_sensors);
    auto weight = [&](SensorIndex from, SensorIndex to) {
        const long diff = std::labs(static_cast<long>(from) - static_cast<long>(to));
        const long d = std::min(diff, n - diff);
        return d == 0 ? 0.0 : table[static_cast<std::size_t>(d - 1)];
    };
    // Next pick from `prev`, with the sensors in `taken` removed.
    auto pick_probabilities = [&](SensorIndex prev, const std::vector<SensorIndex>& taken) {
        std::vector<double> p(n_sensors, 0.0);
        double z = 0.0;
        for (SensorIndex c = 0; c < n_sensors; ++c) {
            if (std::find(taken.begin(), taken.end(), c) != taken.end()) continue;
            p[c] = weight(prev, c);
            z += p[c];
        }
        if (!(z > 0.0)) throw std::invalid_argument("distance table leaves no sensor to pick");
        for (double& v : p) v /= z;
        return p;
    };

    const double first = 1.0 / static_cast<double>(n_sensors);
    std::map<ActiveSet, double> mass;
    for (SensorIndex a = 0; a < n_sensors; ++a) {
        const auto second = pick_probabilities(a, {a});
        for (SensorIndex b = 0; b < n_sensors; ++b) {
            if (second[b] == 0.0) continue;
            if (set_size == 2) {
                mass[ActiveSet{a, b}] += first * second[b];
                continue;
            }
            const auto third = pick_probabilities(b, {a, b});
            for (SensorIndex c = 0; c < n_sensors; ++c) {
                if (third[c] == 0.0) continue;
                mass[ActiveSet{a, b, c}] += first * second[b] * third[c];
            }
        }
    }
    std::vector<PmfEntry> support;
    support.reserve(mass.size());
    for (auto& [set, p] : mass) support.push_back({set, p});
    return {n_sensors, std::move(support)};
}

ActivationPmf make_general_random(std::size_t n_sensors, std::size_t set_size, std::uint64_t seed) {
    if (set_size < 1 || set_size > n_sensors) throw std::invalid_argument("general scenario needs 1 <= A <= N");
    Rng rng(seed);
    std::vector<PmfEntry> support;
    std::vector<SensorIndex> combo(set_size);
    for (std::size_t i = 0; i < set_size; ++i) combo[i] = static_cast<SensorIndex>(i);
    while (true) {
        support.push_back({ActiveSet(combo), 1.0 - rng.uniform()});
        // Advance to the next combination in lexicographic order.
        std::size_t i = set_size;
        while (i > 0 && combo[i - 1] == n_sensors - set_size + i - 1) --i;
        if (i == 0) break;
        ++combo[i - 1];
        for (std::size_t j = i; j < set_size; ++j) combo[j] = combo[j - 1] + 1;
    }
    return ActivationPmf::normalized(n_sensors, std::move(support));
}

void write_pmf(std::ostream& out, const ActivationPmf& pmf) {
    out << "N=" << pmf.n_sensors() << " M-independent\n";
    for (const auto& entry : pmf.support()) {
        const auto& members = entry.set.members();
        for (std::size_t i = 0; i < members.size(); ++i) out << (i ? "," : "") << members[i];
        out << ' ' << detail::format_double(entry.probability) << '\n';
    }
}

void write_pmf_file(const std::filesystem::path& path, const ActivationPmf& pmf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_pmf(out, pmf);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc() && ptr == end;
}

}  // namespace

ActivationPmf read_pmf(std::istream& in, PmfReadOptions options) {
    std::string raw;
    std::size_t line_no = 0;
    std::optional<std::size_t> n_sensors;
    std::vector<PmfEntry> support;
    std::map<ActiveSet, std::size_t> first_seen;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (!n_sensors) {
            const auto space = line.find_first_of(" \t");
            const auto head = line.substr(0, space);
            const auto tail = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
            std::size_t n = 0;
            if (head.substr(0, 2) != "N=" || !parse_number(head.substr(2), n) || n == 0 || tail != "M-independent") {
                throw ParseError(line_no, "expected header 'N=<int> M-independent'");
            }
            n_sensors = n;
            continue;
        }

        const auto space = line.find_first_of(" \t");
        if (space == std::string_view::npos) throw ParseError(line_no, "expected '<indices> <probability>'");
        const auto indices = line.substr(0, space);
        const auto prob_text = trim(line.substr(space));
        std::vector<SensorIndex> members;
        std::size_t pos = 0;
        while (pos <= indices.size()) {
            const auto comma = std::min(indices.find(',', pos), indices.size());
            SensorIndex idx = 0;
            if (!parse_number(indices.substr(pos, comma - pos), idx)) {
                throw ParseError(line_no, "bad sensor index list '" + std::string(indices) + "'");
            }
            if (idx >= *n_sensors) throw ParseError(line_no, "sensor index " + std::to_string(idx) + " >= N");
            if (!members.empty() && idx <= members.back()) {
                throw ParseError(line_no, "sensor indices must be strictly increasing");
            }
            members.push_back(idx);
            pos = comma + 1;
        }
        double p = 0.0;
        if (!parse_number(prob_text, p) || !std::isfinite(p)) {
            throw ParseError(line_no, "bad probability '" + std::string(prob_text) + "'");
        }
        if (!(p > 0.0)) throw ParseError(line_no, "probability must be positive");
        ActiveSet set(std::move(members));
        if (auto [it, inserted] = first_seen.emplace(set, line_no); !inserted) {
            throw ParseError(line_no, "duplicate active set " + to_string(set) + " (first on line " +
                                          std::to_string(it->second) + ")");
        }
        support.push_back({std::move(set), p});
    }
    if (!n_sensors) throw ParseError(line_no, "missing header");
    if (support.empty()) throw ParseError(line_no, "pmf has no entries");

    double total = 0.0;
    for (const auto& e : support) total += e.probability;
    if (std::abs(total - 1.0) > kPmfFileSumTolerance && !options.renormalize) {
        throw ParseError(line_no, "probabilities sum to " + detail::format_double(total) +
                                      "; pass the renormalize option to rescale");
    }
    if (std::abs(total - 1.0) > ActivationPmf::kSumTolerance) {
        return ActivationPmf::normalized(*n_sensors, std::move(support));
    }
    return {*n_sensors, std::move(support)};
}

ActivationPmf read_pmf_file(const std::filesystem::path& path, PmfReadOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_pmf(in, options);
}

}  // namespace groupmac
