#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tabhash/cuckoo.hpp"
#include "tabhash/selftest.hpp"

using namespace tabhash;

TEST_CASE("keys with all-distinct first choices place without evictions") {
    const KeySpec spec{1, 8};
    // scan seeds for a function giving 8 distinct h0 bins on keys 0..7
    for (std::uint64_t seed = 0;; ++seed) {
        const auto views = CuckooHashViews::wide_split(seed, spec, 5);
        std::set<std::uint32_t> h0;
        for (std::uint64_t k = 0; k < 8; ++k) h0.insert(views.bin(0, Key{k}));
        if (h0.size() != 8) continue;

        CuckooTable table(views, 64);
        std::vector<Key> keys;
        for (std::uint64_t k = 0; k < 8; ++k) keys.push_back(Key{k});
        const auto res = insert_all(keys, table);
        REQUIRE(res.placed_all);
        REQUIRE(res.total_evictions == 0);
        for (Key k : keys) {
            REQUIRE(table.slots[0][views.bin(0, k)].has_value());
            REQUIRE(*table.slots[0][views.bin(0, k)] == k);
        }
        break;
    }
}

TEST_CASE("three keys on one slot pair fail at the third insertion") {
    const KeySpec spec{1, 8};
    // with 4 bins per table there are 16 slot pairs over 256 keys, so three
    // keys sharing a pair always exist
    const auto views = CuckooHashViews::wide_split(12345, spec, 2);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Key>> buckets;
    for (std::uint64_t k = 0; k < 256; ++k)
        buckets[{views.bin(0, Key{k}), views.bin(1, Key{k})}].push_back(Key{k});
    std::vector<Key> trio;
    for (auto& [pair, keys] : buckets)
        if (keys.size() >= 3) {
            trio.assign(keys.begin(), keys.begin() + 3);
            break;
        }
    REQUIRE(trio.size() == 3);

    CuckooTable table(views, 100);
    const auto res = insert_all(trio, table);
    REQUIRE(!res.placed_all);
    REQUIRE(res.failed_at == 3);
    REQUIRE(res.pending.has_value());
    REQUIRE(table.occupied() == 2);
}

TEST_CASE("insert_all rejects duplicates") {
    const KeySpec spec{1, 8};
    const auto views = CuckooHashViews::wide_split(1, spec, 4);
    CuckooTable table(views, 10);
    REQUIRE_THROWS_AS(insert_all(std::vector<Key>{Key{1}, Key{1}}, table), input_error);
}

TEST_CASE("successful placements are valid and reproducible") {
    const KeySpec spec{2, 5};
    SplitMix64 rng(9);
    int successes = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto keys = random_distinct_keys(spec, 40, rng.next());
        const std::uint64_t seed = rng.next();
        const auto views = CuckooHashViews::wide_split(seed, spec, 6);
        CuckooTable a(views, 640), b(views, 640);
        const auto ra = insert_all(keys, a);
        const auto rb = insert_all(keys, b);
        REQUIRE(ra.placed_all == rb.placed_all);  // rebuild determinism
        if (!ra.placed_all) {
            REQUIRE(ra.failed_at == rb.failed_at);
            continue;
        }
        ++successes;
        REQUIRE(a.occupied() == keys.size());
        for (Key k : keys) REQUIRE(a.contains(k));
        for (int t = 0; t < 2; ++t)
            for (std::uint64_t bin = 0; bin < a.g; ++bin)
                if (a.slots[t][bin])
                    REQUIRE(a.views.bin(t, *a.slots[t][bin]) == bin);
    }
    REQUIRE(successes > 20);
}

TEST_CASE("feasibility oracle structure cases") {
    const KeySpec spec{2, 4};

    SECTION("independent hash views work too") {
        const auto views = CuckooHashViews::independent(3, 4, spec, 4);
        const auto keys = random_distinct_keys(spec, 10, 5);
        feasibility_oracle(keys, views);  // must simply run
    }

    SECTION("unicyclic components stay feasible, theta components do not") {
        SplitMix64 rng(19);
        int cyclic = 0, theta = 0;
        for (int rep = 0; rep < 400 && (cyclic < 5 || theta < 5); ++rep) {
            const auto keys = random_distinct_keys(spec, 12, rng.next());
            const auto views = CuckooHashViews::wide_split(rng.next(), spec, 3);
            std::vector<ChoiceSet> choices;
            for (Key k : keys) choices.push_back(views.choices(k));
            const auto G = make_graph(2, 8, choices, keys);
            bool any_cycle = false, any_overload = false;
            for (auto& comp : graph_components(G)) {
                const auto vs = vertices_of_subset(G, comp);
                if (comp.size() == vs.size()) any_cycle = true;
                if (comp.size() > vs.size()) any_overload = true;
            }
            const bool feasible = feasibility_oracle(keys, views);
            if (any_overload) {
                REQUIRE(!feasible);
                ++theta;
            } else {
                REQUIRE(feasible);
                if (any_cycle) ++cyclic;
            }
        }
        REQUIRE(cyclic >= 5);
        REQUIRE(theta >= 5);
    }
}

TEST_CASE("oracle equals brute-force orientation search") {
    const KeySpec spec{2, 4};
    SplitMix64 rng(29);
    int infeasible_seen = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::uint64_t m = 3 + rng.below(10);  // <= 12 edges
        const auto keys = random_distinct_keys(spec, m, rng.next());
        const auto views = CuckooHashViews::wide_split(rng.next(), spec, 2);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (Key k : keys) edges.push_back({views.bin(0, k), views.bin(1, k)});
        const bool brute = oracles::orientation_feasible(edges, views.bins());
        REQUIRE(feasibility_oracle(keys, views) == brute);
        if (!brute) ++infeasible_seen;
    }
    REQUIRE(infeasible_seen > 10);
}

TEST_CASE("inserter with a generous budget agrees with the oracle") {
    const KeySpec spec{2, 6};
    SplitMix64 rng(39);
    int infeasible = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int bin_bits = 5 + static_cast<int>(rng.below(5));  // up to 2^10 bins
        const std::uint64_t n = 2ULL << bin_bits;
        const std::uint64_t m = n / 3 + rng.below(n / 6 + 1);
        const auto keys = random_distinct_keys(spec, m, rng.next());
        const auto views = CuckooHashViews::wide_split(rng.next(), spec, bin_bits);
        int lgn = 0;
        while ((1ULL << lgn) < n) ++lgn;
        CuckooTable table(views, 10ULL * lgn * n);
        const bool placed = insert_all(keys, table).placed_all;
        const bool feasible = feasibility_oracle(keys, views);
        REQUIRE(placed == feasible);
        if (!feasible) ++infeasible;
    }
    REQUIRE(infeasible > 20);
}

TEST_CASE("failure experiment") {
    const KeySpec spec{2, 6};

    SECTION("huge eps means a tiny, always-feasible key set") {
        const std::uint64_t ns[] = {1ULL << 7};
        const auto rows = failure_experiment(ns, 50.0, 40, 7, spec);
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0].failures == 0);
        REQUIRE(rows[0].fraction == 0.0);
        REQUIRE(rows[0].m == 1);  // floor(128 / (2 * 51))
    }

    SECTION("rows carry sane Wilson intervals") {
        const std::uint64_t ns[] = {1ULL << 7, 1ULL << 8};
        const auto rows = failure_experiment(ns, 0.5, 60, 11, spec);
        REQUIRE(rows.size() == 2);
        for (const auto& r : rows) {
            REQUIRE(r.wilson.low >= 0.0);
            REQUIRE(r.wilson.high <= 1.0);
            REQUIRE(r.wilson.low <= r.fraction + 1e-12);
            REQUIRE(r.fraction <= r.wilson.high + 1e-12);
        }
    }

    SECTION("n must be twice a power of two") {
        const std::uint64_t ns[] = {100};
        REQUIRE_THROWS_AS(failure_experiment(ns, 0.5, 5, 1, spec), config_error);
    }
}
