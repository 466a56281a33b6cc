#pragma once

// Slow reference implementations used as test oracles. They share no code
// with the library beyond the plain data types.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "groupmac/model.hpp"

namespace oracle {

using groupmac::ActivationPmf;
using groupmac::DeterministicStrategy;

// Counts transmitters per channel.
inline bool succeeds(const std::vector<std::vector<int>>& moves) {
    if (moves.empty()) return false;
    const std::size_t m = moves.front().size();
    for (std::size_t ch = 0; ch < m; ++ch) {
        int count = 0;
        for (const auto& mv : moves) count += mv[ch];
        if (count == 1) return true;
    }
    return false;
}

inline std::vector<int> bits_of(std::uint32_t code, int channels) {
    std::vector<int> out(channels);
    for (int m = 0; m < channels; ++m) out[m] = static_cast<int>((code >> m) & 1U);
    return out;
}

inline double value(const std::vector<std::uint32_t>& codes, int channels, const ActivationPmf& pmf) {
    double total = 0.0;
    for (const auto& e : pmf.support()) {
        bool ok = false;
        for (int ch = 0; ch < channels && !ok; ++ch) {
            int count = 0;
            for (auto s : e.set.members()) count += static_cast<int>((codes[s] >> ch) & 1U);
            ok = count == 1;
        }
        if (ok) total += e.probability;
    }
    return total;
}

// Every one of the (2^M)^N strategies, odometer order.
struct Optimum {
    double value = -1.0;
    std::vector<std::uint32_t> first_argmax;
};

inline Optimum brute_force(const ActivationPmf& pmf, int channels) {
    const std::size_t n = pmf.n_sensors();
    const std::uint32_t base = 1U << channels;
    std::vector<std::uint32_t> codes(n, 0);
    Optimum best;
    while (true) {
        const double v = value(codes, channels, pmf);
        if (v > best.value + 1e-12) {
            best.value = v;
            best.first_argmax = codes;
        }
        // odometer with the last sensor fastest keeps lexicographic order
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++codes[i] < base) break;
            codes[i] = 0;
            if (i == 0) return best;
        }
        if (n == 0) return best;
    }
}

// Direct ordered-pick enumeration of the ring scenario.
inline std::map<std::vector<std::uint32_t>, double> ring_pmf(int n, int a, const std::vector<double>& per_node) {
    auto dist = [n](int u, int v) {
        const int d = std::abs(u - v);
        return std::min(d, n - d);
    };
    auto weight = [&](int from, int to) { return from == to ? 0.0 : per_node[dist(from, to) - 1]; };
    std::map<std::vector<std::uint32_t>, double> out;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double pj = weight(i, j);
            if (pj == 0.0) continue;
            if (a == 2) {
                std::vector<std::uint32_t> key{static_cast<std::uint32_t>(std::min(i, j)),
                                               static_cast<std::uint32_t>(std::max(i, j))};
                out[key] += pj / n;
                continue;
            }
            double rest = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k != i) rest += weight(j, k);
            }
            for (int k = 0; k < n; ++k) {
                if (k == i) continue;
                const double pk = weight(j, k);
                if (pk == 0.0) continue;
                std::vector<std::uint32_t> key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                               static_cast<std::uint32_t>(k)};
                std::sort(key.begin(), key.end());
                out[key] += pj * (pk / rest) / n;
            }
        }
    }
    return out;
}

// Random PMF over distinct subsets with sizes in [min_size, max_size].
inline ActivationPmf random_pmf(std::mt19937& gen, std::size_t n, std::size_t min_size, std::size_t max_size,
                                std::size_t entries) {
    std::uniform_int_distribution<std::size_t> size_dist(min_size, max_size);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::set<std::vector<groupmac::SensorIndex>> chosen;
    std::vector<groupmac::SensorIndex> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<groupmac::SensorIndex>(i);
    for (std::size_t attempt = 0; chosen.size() < entries && attempt < 100 * entries; ++attempt) {
        std::shuffle(all.begin(), all.end(), gen);
        std::vector<groupmac::SensorIndex> pick(all.begin(), all.begin() + static_cast<long>(size_dist(gen)));
        std::sort(pick.begin(), pick.end());
        chosen.insert(pick);
    }
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < chosen.size(); ++i) total += w.emplace_back(weight(gen));
    std::vector<groupmac::PmfEntry> support;
    std::size_t i = 0;
    for (const auto& set : chosen) support.push_back({groupmac::ActiveSet(set), w[i++] / total});
    return ActivationPmf::normalized(n, std::move(support));
}

inline std::vector<std::uint32_t> random_codes(std::mt19937& gen, std::size_t n, int channels) {
    std::uniform_int_distribution<std::uint32_t> dist(0, (1U << channels) - 1);
    std::vector<std::uint32_t> out(n);
    for (auto& c : out) c = dist(gen);
    return out;
}

inline std::vector<std::vector<double>> random_rows(std::mt19937& gen, std::size_t n, int channels) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(std::size_t{1} << channels));
    for (auto& row : rows) {
        double total = 0.0;
        for (auto& x : row) total += x = u(gen);
        for (auto& x : row) x /= total;
    }
    return rows;
}

// Exact mixed value: sum over every joint move of all N sensors.
inline double mixed_value(const std::vector<std::vector<double>>& rows, int channels, const ActivationPmf& pmf) {
    const std::size_t n = rows.size();
    const std::uint32_t base = 1U << channels;
    std::vector<std::uint32_t> codes(n, 0);
    double total = 0.0;
    while (true) {
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) p *= rows[i][codes[i]];
        if (p > 0.0) total += p * value(codes, channels, pmf);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++codes[i] < base) break;
            codes[i] = 0;
            if (i == 0) return total;
        }
    }
}

}  // namespace oracle
