#pragma once

// Two-table cuckoo hashing on tabulation hash views, with the structural
// feasibility oracle: placement is possible iff no connected component of the
// 2-uniform hash graph has more edges than vertices. The eviction-based
// inserter exists to be checked against that oracle, not to define truth.

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "tabhash/common.hpp"
#include "tabhash/hashgraph.hpp"
#include "tabhash/keys.hpp"
#include "tabhash/tabulation.hpp"

namespace tabhash {

// Two hash views: the two bin_bits-wide slices of one wide tabulation
// function, or two independently seeded functions.
class CuckooHashViews {
public:
    static CuckooHashViews wide_split(std::uint64_t seed, const KeySpec& spec, int bin_bits) {
        CuckooHashViews v;
        v.bin_bits_ = bin_bits;
        v.fns_.push_back(make_tabulation(seed, spec, 2 * bin_bits));
        return v;
    }
    static CuckooHashViews independent(std::uint64_t seed0, std::uint64_t seed1,
                                       const KeySpec& spec, int bin_bits) {
        CuckooHashViews v;
        v.bin_bits_ = bin_bits;
        v.fns_.push_back(make_tabulation(seed0, spec, bin_bits));
        v.fns_.push_back(make_tabulation(seed1, spec, bin_bits));
        return v;
    }

    int bin_bits() const { return bin_bits_; }
    std::uint64_t bins() const { return 1ULL << bin_bits_; }

    std::uint32_t bin(int table, Key x) const {
        if (fns_.size() == 1) {
            const std::uint64_t h = hash(fns_[0], x);
            return static_cast<std::uint32_t>((h >> (table * bin_bits_)) &
                                              ((1ULL << bin_bits_) - 1));
        }
        return static_cast<std::uint32_t>(hash(fns_[table], x) & ((1ULL << bin_bits_) - 1));
    }

    ChoiceSet choices(Key x) const { return ChoiceSet{{bin(0, x), bin(1, x)}}; }

private:
    int bin_bits_ = 0;
    std::vector<TabulationFn> fns_;
};

struct CuckooTable {
    std::uint64_t g = 0;  // bins per table
    CuckooHashViews views;
    std::uint64_t kick_budget = 0;  // max evictions per insertion
    std::vector<std::optional<Key>> slots[2];

    explicit CuckooTable(CuckooHashViews v, std::uint64_t budget)
        : g(v.bins()), views(std::move(v)), kick_budget(budget) {
        slots[0].assign(g, std::nullopt);
        slots[1].assign(g, std::nullopt);
    }

    bool contains(Key x) const {
        return (slots[0][views.bin(0, x)] && *slots[0][views.bin(0, x)] == x) ||
               (slots[1][views.bin(1, x)] && *slots[1][views.bin(1, x)] == x);
    }
    std::uint64_t occupied() const {
        std::uint64_t n = 0;
        for (int t = 0; t < 2; ++t)
            for (const auto& s : slots[t])
                if (s) ++n;
        return n;
    }
};

struct InsertResult {
    bool placed_all = true;
    std::size_t failed_at = 0;          // 1-based index of the failing key
    std::optional<Key> pending;         // the key left homeless on failure
    std::uint64_t total_evictions = 0;
};

// Standard eviction-chain insertion, table 0 tried first. On failure the
// table keeps every displaced key in a valid slot; only `pending` is out.
inline InsertResult insert_all(std::span<const Key> keys, CuckooTable& table) {
    {
        std::set<Key> distinct(keys.begin(), keys.end());
        if (distinct.size() != keys.size())
            throw input_error("insert_all: keys must be distinct");
    }
    InsertResult res;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        Key cur = keys[i];
        int side = 0;
        bool placed = false;
        for (std::uint64_t kick = 0; kick <= table.kick_budget; ++kick) {
            auto& slot = table.slots[side][table.views.bin(side, cur)];
            if (!slot) {
                slot = cur;
                placed = true;
                break;
            }
            std::swap(cur, *slot);
            ++res.total_evictions;
            side = 1 - side;  // the evicted key goes to its other table
        }
        if (!placed) {
            res.placed_all = false;
            res.failed_at = i + 1;
            res.pending = cur;
            return res;
        }
    }
    return res;
}

// Cuckoo placement exists iff every component of the hash graph satisfies
// |E| <= |V|.
inline bool feasibility_oracle(std::span<const Key> keys, const CuckooHashViews& views) {
    std::vector<ChoiceSet> choices;
    choices.reserve(keys.size());
    for (Key k : keys) choices.push_back(views.choices(k));
    const HashGraph G = make_graph(2, views.bins(), choices, keys);
    for (auto& comp : graph_components(G)) {
        const auto vs = vertices_of_subset(G, comp);
        if (comp.size() > vs.size()) return false;
    }
    return true;
}

// 95% Wilson score interval for a binomial fraction.
struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

inline WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct FailureRow {
    std::uint64_t n = 0;       // total bins (two tables of n/2)
    std::uint64_t m = 0;       // keys per trial
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;  // trials where no placement exists
    double fraction = 0.0;
    WilsonInterval wilson;
};

// Shared with the harness: deterministic distinct random keys for one trial.
inline std::vector<Key> random_distinct_keys(const KeySpec& spec, std::uint64_t m,
                                             std::uint64_t seed) {
    spec.validate();
    const int bits = spec.total_bits();
    const std::uint64_t universe = bits >= 64 ? 0 : (1ULL << bits);  // 0 means 2^64
    if (universe != 0 && m > universe)
        throw config_error("random keys: m exceeds the universe size");
    SplitMix64 rng(seed);
    std::vector<Key> keys;
    keys.reserve(m);
    if (universe != 0 && universe <= (1ULL << 24) && m * 2 >= universe) {
        // Dense draw: deterministic Fisher-Yates over the whole universe.
        std::vector<std::uint64_t> all(universe);
        for (std::uint64_t v = 0; v < universe; ++v) all[v] = v;
        for (std::uint64_t v = universe - 1; v > 0; --v)
            std::swap(all[v], all[rng.below(v + 1)]);
        for (std::uint64_t j = 0; j < m; ++j) keys.push_back(Key{all[j]});
        return keys;
    }
    std::set<std::uint64_t> seen;
    const std::uint64_t mask = spec.universe_mask();
    while (keys.size() < m) {
        const std::uint64_t v = rng.next() & mask;
        if (seen.insert(v).second) keys.push_back(Key{v});
    }
    return keys;
}

// Fraction of trials whose key set admits no cuckoo placement, per n. The
// oracle decides failure; eviction budgets play no part here.
inline std::vector<FailureRow> failure_experiment(std::span<const std::uint64_t> ns,
                                                  double eps, std::uint64_t trials,
                                                  std::uint64_t master_seed,
                                                  const KeySpec& spec) {
    if (!(eps > 0)) throw config_error("failure_experiment: eps must be positive");
    std::vector<FailureRow> rows;
    for (std::size_t row_idx = 0; row_idx < ns.size(); ++row_idx) {
        const std::uint64_t n = ns[row_idx];
        int bin_bits = 0;
        while ((2ULL << bin_bits) < n) ++bin_bits;
        if ((2ULL << bin_bits) != n)
            throw config_error("failure_experiment: n must be 2 * 2^b");
        FailureRow row;
        row.n = n;
        row.m = static_cast<std::uint64_t>(
            std::floor(static_cast<double>(n) / (2.0 * (1.0 + eps))));
        row.trials = trials;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const std::uint64_t ts =
                trial_seed(master_seed, (row_idx << 32) ^ t);
            const auto keys = random_distinct_keys(spec, row.m, splitmix64(ts));
            const auto views = CuckooHashViews::wide_split(ts, spec, bin_bits);
            if (!feasibility_oracle(keys, views)) ++row.failures;
        }
        row.fraction = trials == 0 ? 0.0
                                   : static_cast<double>(row.failures) /
                                         static_cast<double>(trials);
        row.wilson = wilson95(row.failures, trials);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tabhash
