#pragma once

// Sequential d-choice ball placement. Each key is offered one bin per group
// and lands in a least-loaded choice; ties go to the tie-break rule. The
// full insertion log (which key was a bin's j-th ball) is recorded so load
// graphs can be rebuilt from the state alone.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tabhash/common.hpp"
#include "tabhash/keys.hpp"
#include "tabhash/tabulation.hpp"

namespace tabhash {

enum class TieBreak {
    AlwaysGoLeft,  // smallest group index among tied minima
    LowestIndex,   // deterministic synonym used for the "arbitrary tie" regime
    SeededRandom,  // uniform among tied minima from a trial-local RNG
};

inline const char* tie_break_name(TieBreak t) {
    switch (t) {
        case TieBreak::AlwaysGoLeft: return "agl";
        case TieBreak::LowestIndex: return "left";
        case TieBreak::SeededRandom: return "random";
    }
    return "?";
}

struct LogEntry {
    Key key;
    std::uint32_t step;  // insertion index; equals the key's edge id
};

struct Placement {
    std::uint32_t group = 0;
    std::uint32_t bin = 0;
    std::uint32_t step = 0;
};

struct LoadState {
    int d = 0;
    std::uint64_t g = 0;                    // bins per group
    std::vector<std::uint32_t> loads;       // d*g entries, group-major
    std::vector<std::vector<LogEntry>> logs;
    std::vector<Placement> placements;      // per key, in insertion order
    std::uint64_t ties_encountered = 0;

    std::uint64_t bin_index(std::uint32_t group, std::uint32_t bin) const {
        return static_cast<std::uint64_t>(group) * g + bin;
    }
    std::uint64_t balls() const { return placements.size(); }
};

namespace detail {

// The tie decision shared by allocate and replay: index of the chosen group.
inline int choose_group(const std::vector<std::uint32_t>& loads, const LoadState& st,
                        const ChoiceSet& cs, TieBreak tie, SplitMix64& tie_rng,
                        bool& was_tie) {
    std::uint32_t best = ~0U;
    for (int i = 0; i < st.d; ++i)
        best = std::min(best, loads[st.bin_index(i, cs.bins[i])]);
    int tied = 0;
    int first = -1;
    for (int i = 0; i < st.d; ++i) {
        if (loads[st.bin_index(i, cs.bins[i])] == best) {
            if (first < 0) first = i;
            ++tied;
        }
    }
    was_tie = tied > 1;
    if (tied == 1 || tie != TieBreak::SeededRandom) return first;
    std::uint64_t pick = tie_rng.below(tied);
    for (int i = 0; i < st.d; ++i) {
        if (loads[st.bin_index(i, cs.bins[i])] == best) {
            if (pick == 0) return i;
            --pick;
        }
    }
    return first;  // unreachable
}

}  // namespace detail

// Core placement loop on precomputed choices; keys may repeat.
inline LoadState allocate_choices(std::span<const Key> keys,
                                  std::span<const ChoiceSet> choices, int d,
                                  std::uint64_t g, TieBreak tie,
                                  std::uint64_t tie_seed = 0) {
    if (d < 1) throw config_error("allocate: d must be >= 1");
    if (g < 1) throw config_error("allocate: g must be >= 1");
    if (keys.size() != choices.size())
        throw input_error("allocate: keys/choices length mismatch");

    LoadState st;
    st.d = d;
    st.g = g;
    st.loads.assign(static_cast<std::size_t>(d) * g, 0);
    st.logs.resize(static_cast<std::size_t>(d) * g);
    st.placements.reserve(keys.size());
    SplitMix64 tie_rng(tie_seed);

    for (std::size_t step = 0; step < keys.size(); ++step) {
        const ChoiceSet& cs = choices[step];
        if (static_cast<int>(cs.bins.size()) != d)
            throw input_error("allocate: choice set arity mismatch");
        for (std::uint32_t b : cs.bins)
            if (b >= g) throw input_error("allocate: bin choice out of range");
        bool was_tie = false;
        const int grp = detail::choose_group(st.loads, st, cs, tie, tie_rng, was_tie);
        if (was_tie) ++st.ties_encountered;
        const std::uint64_t idx = st.bin_index(grp, cs.bins[grp]);
        ++st.loads[idx];
        st.logs[idx].push_back(LogEntry{keys[step], static_cast<std::uint32_t>(step)});
        st.placements.push_back(Placement{static_cast<std::uint32_t>(grp), cs.bins[grp],
                                          static_cast<std::uint32_t>(step)});
    }
    return st;
}

inline std::vector<ChoiceSet> derive_all_choices(std::span<const Key> keys,
                                                 const TabulationFn& f, int d,
                                                 int bin_bits) {
    std::vector<ChoiceSet> out;
    out.reserve(keys.size());
    for (Key k : keys) out.push_back(derive_choices(f, k, d, bin_bits));
    return out;
}

inline LoadState allocate(std::span<const Key> keys, const TabulationFn& f, int d,
                          int bin_bits, TieBreak tie, std::uint64_t tie_seed = 0) {
    const auto choices = derive_all_choices(keys, f, d, bin_bits);
    return allocate_choices(keys, choices, d, 1ULL << bin_bits, tie, tie_seed);
}

struct ReplayResult {
    bool ok = true;
    std::size_t first_bad_step = 0;
    explicit operator bool() const { return ok; }
};

// Independent step-by-step re-simulation: checks that every recorded
// placement was a minimum-load choice at its time and that the tie rule was
// honoured, and that loads/logs are consistent with the placements.
inline ReplayResult replay_verify_choices(const LoadState& state, std::span<const Key> keys,
                                          std::span<const ChoiceSet> choices, int d,
                                          std::uint64_t g, TieBreak tie,
                                          std::uint64_t tie_seed = 0) {
    if (state.d != d || state.g != g || keys.size() != choices.size() ||
        state.placements.size() != keys.size())
        throw input_error("replay_verify: state does not match the inputs");

    LoadState sim;
    sim.d = d;
    sim.g = g;
    sim.loads.assign(static_cast<std::size_t>(d) * g, 0);
    SplitMix64 tie_rng(tie_seed);

    for (std::size_t step = 0; step < keys.size(); ++step) {
        const ChoiceSet& cs = choices[step];
        const Placement& pl = state.placements[step];
        if (pl.group >= static_cast<std::uint32_t>(d) || pl.bin != cs.bins[pl.group])
            return ReplayResult{false, step};

        std::uint32_t best = ~0U;
        for (int i = 0; i < d; ++i)
            best = std::min(best, sim.loads[sim.bin_index(i, cs.bins[i])]);
        if (sim.loads[sim.bin_index(pl.group, pl.bin)] != best)
            return ReplayResult{false, step};

        // The rule pins the exact group: leftmost tied minimum for the
        // deterministic rules, the RNG pick for SeededRandom.
        bool was_tie = false;
        const int expect = detail::choose_group(sim.loads, sim, cs, tie, tie_rng, was_tie);
        if (static_cast<int>(pl.group) != expect) return ReplayResult{false, step};
        ++sim.loads[sim.bin_index(pl.group, pl.bin)];
    }

    // Cross-check loads and logs against the replayed totals.
    if (sim.loads != state.loads) return ReplayResult{false, keys.size()};
    for (std::size_t b = 0; b < state.logs.size(); ++b) {
        if (state.logs[b].size() != state.loads[b]) return ReplayResult{false, keys.size()};
        for (std::size_t j = 0; j < state.logs[b].size(); ++j) {
            const LogEntry& e = state.logs[b][j];
            if (e.step >= keys.size() || !(keys[e.step] == e.key))
                return ReplayResult{false, keys.size()};
            const Placement& pl = state.placements[e.step];
            if (state.bin_index(pl.group, pl.bin) != b) return ReplayResult{false, keys.size()};
            if (j > 0 && state.logs[b][j - 1].step >= e.step)
                return ReplayResult{false, keys.size()};
        }
    }
    return ReplayResult{};
}

inline ReplayResult replay_verify(const LoadState& state, std::span<const Key> keys,
                                  const TabulationFn& f, int d, int bin_bits,
                                  TieBreak tie, std::uint64_t tie_seed = 0) {
    const auto choices = derive_all_choices(keys, f, d, bin_bits);
    return replay_verify_choices(state, keys, choices, d, 1ULL << bin_bits, tie, tie_seed);
}

inline std::uint32_t max_load(const LoadState& state) {
    std::uint32_t best = 0;
    for (std::uint32_t v : state.loads) best = std::max(best, v);
    return best;
}

// load value -> number of bins with that load; sums to d*g.
inline std::map<std::uint32_t, std::uint64_t> load_histogram(const LoadState& state) {
    std::map<std::uint32_t, std::uint64_t> h;
    for (std::uint32_t v : state.loads) ++h[v];
    return h;
}

}  // namespace tabhash
