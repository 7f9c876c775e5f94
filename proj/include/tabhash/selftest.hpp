#pragma once

// Oracle-backed invariants from every module, packaged for the `selftest`
// subcommand: each check is small, deterministic, and fails loudly.

#include <cstdint>
#include <vector>

#include "tabhash/harness.hpp"

namespace tabhash {

inline std::vector<ChoiceSet> random_choice_sets(int d, std::uint64_t g, std::uint64_t m,
                                                 std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<ChoiceSet> out(m);
    for (auto& cs : out) {
        cs.bins.resize(d);
        for (int i = 0; i < d; ++i) cs.bins[i] = static_cast<std::uint32_t>(rng.below(g));
    }
    return out;
}

inline std::vector<Key> sequential_keys(std::uint64_t m) {
    std::vector<Key> keys(m);
    for (std::uint64_t i = 0; i < m; ++i) keys[i] = Key{i};
    return keys;
}

// Exhaustive zero-sum subset search; the independent oracle for
// dependent_subset verdicts on small key sets.
inline bool exhaustive_zero_subset_exists(const KeySpec& spec, std::span<const Key> keys) {
    const std::size_t k = keys.size();
    for (std::uint64_t mask = 1; mask < (1ULL << k); ++mask) {
        std::vector<Key> subset;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1ULL << i)) subset.push_back(keys[i]);
        if (key_xor(spec, subset).empty()) return true;
    }
    return false;
}

inline SuiteResult run_selftest(std::uint64_t seed = 42) {
    SuiteResult res;
    SplitMix64 rng(seed);
    const KeySpec spec24{2, 4};

    // tabulation: determinism and seed sensitivity
    {
        const KeySpec s{4, 8};
        const auto f1 = make_tabulation(7, s, 32);
        const auto f2 = make_tabulation(7, s, 32);
        const auto f3 = make_tabulation(8, s, 32);
        res.add("tabulation", "determinism", f1.tables == f2.tables);
        res.add("tabulation", "seed-sensitivity", f1.tables != f3.tables);
        res.add("tabulation", "wide-split",
                derive_choices(f1, Key{0}, 2, 4).bins.size() == 2);
    }

    // hash linearity over position-character sets
    {
        const auto f = make_tabulation(rng.next(), spec24, 32);
        bool ok = true;
        for (int i = 0; i < 200 && ok; ++i) {
            const Key a{rng.below(256)};
            const Key b{rng.below(256)};
            const auto sa = key_to_pcs(spec24, a);
            const auto sb = key_to_pcs(spec24, b);
            ok = hash_pcs(f, pcs_xor(sa, sb)) == (hash_pcs(f, sa) ^ hash_pcs(f, sb));
        }
        res.add("tabulation", "pcs-linearity", ok);
    }

    // dependence: the grid, 3-independence, exhaustive agreement
    {
        const auto grid = grid_keys(spec24, {{0, 1}}, {{2, 3}});
        const auto dep = dependent_subset(spec24, grid);
        res.add("dependence", "grid-found", dep && dep->size() == 4);

        bool triples_ok = true;
        for (int i = 0; i < 500 && triples_ok; ++i) {
            const auto keys = random_distinct_keys(spec24, 3, rng.next());
            triples_ok = !dependent_subset(spec24, keys).has_value();
        }
        res.add("dependence", "3-independence", triples_ok);

        const KeySpec tiny{2, 2};
        bool agree = true;
        for (int i = 0; i < 300 && agree; ++i) {
            const auto keys = random_distinct_keys(tiny, 6, rng.next());
            agree = dependent_subset(tiny, keys).has_value() ==
                    exhaustive_zero_subset_exists(tiny, keys);
        }
        res.add("dependence", "exhaustive-agreement", agree);
    }

    // counting bound and pair-class identity
    {
        const KeySpec c1{1, 4};
        std::vector<std::vector<Key>> groups(4, std::vector<Key>{Key{3}, Key{11}});
        const auto zc = count_zero_xor_tuples(c1, groups);
        res.add("counting", "c1-t2-ab", zc.count == 8 && std::abs(zc.bound - 12.0) < 1e-9);

        const auto g = grid_keys(spec24, iota_vals(4), iota_vals(4));
        std::vector<std::vector<Key>> g4(4, g);
        const auto zc2 = count_zero_xor_tuples(spec24, g4);
        const auto pc = pair_xor_classes(spec24, g);
        res.add("counting", "grid-bound", static_cast<double>(zc2.count) <= zc2.bound);
        res.add("pair-classes", "identity-equality",
                pc.sum_squares == zc2.count && pc.identity_size == g.size());
    }

    // multiply-shift basics
    res.add("multiply-shift", "identity",
            multiply_shift_reduce(0xAB, 1, 8, 8) == 0xAB &&
                multiply_shift_reduce(0, 12345, 32, 10) == 0);

    // Fibonacci numbers and phi
    {
        DaryFibonacci f2(2), f3(3);
        bool fib_ok = f3.value(4) == 4;
        const std::uint64_t f2_expect[] = {1, 1, 2, 3, 5, 8};
        for (int k = 1; k <= 6; ++k) fib_ok = fib_ok && f2.value(k) == f2_expect[k - 1];
        res.add("fibonacci", "base-values", fib_ok);

        const auto p2 = phi_d(2);
        res.add("fibonacci", "phi2-closed-form",
                std::abs(p2.value - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
        bool mono = true;
        double prev = 1.0;
        for (int d = 2; d <= 8; ++d) {
            const double v = phi_d(d).value;
            mono = mono && v > prev && v < 2.0;
            prev = v;
        }
        res.add("fibonacci", "phi-monotone", mono);
    }

    // allocation: conservation, replay, leftmost tie, d=1 multiplicity
    {
        const auto f = make_tabulation(rng.next(), spec24, 32);
        const auto keys = random_distinct_keys(spec24, 120, rng.next());
        bool ok = true;
        for (TieBreak tie :
             {TieBreak::SeededRandom, TieBreak::AlwaysGoLeft, TieBreak::LowestIndex}) {
            const auto st = allocate(keys, f, 3, 4, tie, 99);
            std::uint64_t total = 0;
            for (auto v : st.loads) total += v;
            ok = ok && total == keys.size() &&
                 replay_verify(st, keys, f, 3, 4, tie, 99).ok;
        }
        res.add("allocation", "conservation-and-replay", ok);

        const std::vector<Key> one{Key{5}};
        const std::vector<ChoiceSet> choice{ChoiceSet{{3, 1}}};
        const auto st = allocate_choices(one, choice, 2, 8, TieBreak::AlwaysGoLeft);
        res.add("allocation", "leftmost-on-tie",
                st.placements[0].group == 0 && st.placements[0].bin == 3);

        const auto st1 = allocate(keys, f, 1, 5, TieBreak::SeededRandom, 1);
        std::map<std::uint32_t, std::uint64_t> mult;
        for (Key k : keys) ++mult[derive_choices(f, k, 1, 5).bins[0]];
        bool d1_ok = true;
        for (auto [bin, cnt] : mult) d1_ok = d1_ok && st1.loads[bin] == cnt;
        res.add("allocation", "d1-multiplicity", d1_ok);
    }

    // hash graph: component stats cross-check their own tree characterisation
    {
        bool ok = true;
        for (int i = 0; i < 40 && ok; ++i) {
            const std::uint64_t m = 4 + rng.below(24);
            const auto choices = random_choice_sets(2, 8, m, rng.next());
            const auto G = make_graph(2, 8, choices, sequential_keys(m));
            try {
                component_stats(G);
            } catch (const input_error&) {
                ok = false;
            }
        }
        res.add("hashgraph", "tree-characterisation", ok);
    }

    // theta fixture: tight, a D2 double cycle, infeasible for cuckoo
    {
        const std::vector<ChoiceSet> theta(3, ChoiceSet{{4, 4}});
        const auto G = make_graph(2, 8, theta, sequential_keys(3));
        const auto tight = find_tight_subgraph(G);
        const auto dc = find_double_cycle(G);
        res.add("hashgraph", "theta-tight", tight && tight->edge_ids.size() == 3);
        res.add("hashgraph", "theta-d2", dc && dc->cls == SubgraphClass::DoubleCycleD2);
    }

    // cuckoo: oracle vs eviction inserter on random instances
    {
        const KeySpec s{2, 6};
        bool agree = true;
        for (int i = 0; i < 60 && agree; ++i) {
            const auto keys = random_distinct_keys(s, 20 + rng.below(20), rng.next());
            const auto views = CuckooHashViews::wide_split(rng.next(), s, 5);
            CuckooTable table(views, 10 * 64);
            agree = insert_all(keys, table).placed_all == feasibility_oracle(keys, views);
        }
        res.add("cuckoo", "oracle-inserter-agreement", agree);
    }

    // witness machinery: counts and a dense scan with zero `other`
    {
        bool counts_ok = true;
        for (int d = 2; d <= 3 && counts_ok; ++d)
            for (int k = 1; k <= 4 && counts_ok; ++k)
                for (int ell = 1; ell <= k && counts_ok; ++ell) {
                    counts_ok = validate_counts(WitnessShape{d, k, ell, 0});
                    for (int i = 1; i <= d && counts_ok; ++i)
                        counts_ok = validate_counts(WitnessShape{d, k, ell, i});
                }
        res.add("witness-trees", "count-formulas", counts_ok);

        ExperimentConfig cfg;
        cfg.cmd = "witness-scan";
        cfg.d_list = {2};
        cfg.bin_bits = 5;
        cfg.trials = 12;
        cfg.seed = seed ^ 0x5ca9;
        cfg.tie = TieBreak::SeededRandom;
        const auto scan = run_witness_scan(cfg);
        res.add("witness-scan", "no-other",
                scan.other == 0 && scan.tight_violations == 0 && scan.eligible > 0);
    }

    return res;
}

}  // namespace tabhash
