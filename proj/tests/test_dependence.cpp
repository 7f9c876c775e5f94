#include <catch2/catch_amalgamated.hpp>

#include "tabhash/dependence.hpp"
#include "tabhash/selftest.hpp"
#include "tabhash/tabulation.hpp"

using namespace tabhash;

namespace {

const KeySpec kSpec{2, 4};

std::vector<Key> grid4(std::uint64_t a0, std::uint64_t a1, std::uint64_t b0,
                       std::uint64_t b1) {
    return {make_key(kSpec, {a0, b0}), make_key(kSpec, {a0, b1}),
            make_key(kSpec, {a1, b0}), make_key(kSpec, {a1, b1})};
}

}  // namespace

TEST_CASE("key_xor basics") {
    const Key x = make_key(kSpec, {3, 7});
    REQUIRE(key_xor(kSpec, std::vector<Key>{x, x}).empty());

    const auto grid = grid4(1, 2, 5, 9);
    REQUIRE(key_xor(kSpec, grid).empty());

    const Key y = make_key(kSpec, {3, 8});
    REQUIRE(!key_xor(kSpec, std::vector<Key>{x, y}).empty());
}

TEST_CASE("dependent_subset finds the grid dependence") {
    const auto grid = grid4(1, 2, 5, 9);
    const auto dep = dependent_subset(kSpec, grid);
    REQUIRE(dep.has_value());
    REQUIRE(*dep == std::vector<std::size_t>{0, 1, 2, 3});

    // the dependence forces XOR-of-hashes to zero for every function
    SplitMix64 rng(5);
    for (int s = 0; s < 100; ++s) {
        const auto f = make_tabulation(rng.next(), kSpec, 32);
        std::uint64_t x = 0;
        for (auto idx : *dep) x ^= hash(f, grid[idx]);
        REQUIRE(x == 0);
    }
}

TEST_CASE("three distinct keys are always independent") {
    SplitMix64 rng(6);
    for (int i = 0; i < 10'000; ++i) {
        const auto keys = random_distinct_keys(kSpec, 3, rng.next());
        REQUIRE(!dependent_subset(kSpec, keys).has_value());
    }
}

TEST_CASE("dependent_subset agrees with exhaustive search") {
    const KeySpec tiny{2, 2};  // 2x2-bit characters: dependences are common
    SplitMix64 rng(7);
    int found = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto keys = random_distinct_keys(tiny, 6, rng.next());
        const auto dep = dependent_subset(tiny, keys);
        const bool oracle = exhaustive_zero_subset_exists(tiny, keys);
        REQUIRE(dep.has_value() == oracle);
        if (dep) {
            ++found;
            std::vector<Key> subset;
            for (auto idx : *dep) subset.push_back(keys[idx]);
            REQUIRE(key_xor(tiny, subset).empty());
        }
    }
    REQUIRE(found > 0);  // the universe is small enough that some must occur
}

TEST_CASE("dependent_subset rejects duplicates") {
    const Key x = make_key(kSpec, {1, 1});
    REQUIRE_THROWS_AS(dependent_subset(kSpec, std::vector<Key>{x, x}), input_error);
}

TEST_CASE("zero-XOR tuple counting") {
    SECTION("c=1, t=2, both characters: eight zero tuples, bound twelve") {
        const KeySpec c1{1, 4};
        std::vector<std::vector<Key>> sets(4, std::vector<Key>{Key{3}, Key{11}});
        const auto zc = count_zero_xor_tuples(c1, sets);
        REQUIRE(zc.count == 8);
        REQUIRE_THAT(zc.bound, Catch::Matchers::WithinAbs(12.0, 1e-9));
    }

    SECTION("an empty set forces zero") {
        std::vector<std::vector<Key>> sets(4, std::vector<Key>{Key{1}});
        sets[2].clear();
        REQUIRE(count_zero_xor_tuples(kSpec, sets).count == 0);
    }

    SECTION("t=1 over one set counts only the diagonal") {
        const auto s = random_distinct_keys(kSpec, 17, 99);
        std::vector<std::vector<Key>> sets{s, s};
        const auto zc = count_zero_xor_tuples(kSpec, sets);
        REQUIRE(zc.count == 17);  // x ^ y empty iff x == y
        REQUIRE_THAT(zc.bound, Catch::Matchers::WithinAbs(17.0, 1e-9));  // 1^c * |S|
    }

    SECTION("bound holds on random instances") {
        SplitMix64 rng(8);
        for (int t2 : {2, 4, 6}) {
            for (int rep = 0; rep < 30; ++rep) {
                std::vector<std::vector<Key>> sets;
                for (int i = 0; i < t2; ++i)
                    sets.push_back(random_distinct_keys(kSpec, 2 + rng.below(9), rng.next()));
                const auto zc = count_zero_xor_tuples(kSpec, sets);
                REQUIRE(static_cast<double>(zc.count) <= zc.bound + 1e-9);
            }
        }
    }

    SECTION("validation and caps") {
        std::vector<std::vector<Key>> odd(3, std::vector<Key>{Key{1}});
        REQUIRE_THROWS_AS(count_zero_xor_tuples(kSpec, odd), input_error);
        std::vector<std::vector<Key>> big(4, random_distinct_keys(kSpec, 200, 1));
        REQUIRE_THROWS_AS(count_zero_xor_tuples(kSpec, big, 1000), resource_error);
    }
}

TEST_CASE("pair-XOR classes") {
    SECTION("identity class always present with size m") {
        const auto keys = random_distinct_keys(kSpec, 40, 123);
        const auto pc = pair_xor_classes(kSpec, keys);
        REQUIRE(pc.m == 40);
        REQUIRE(pc.identity_size == 40);
    }

    SECTION("keys with pairwise-distinct XOR sets: identity plus doubletons") {
        // single-position keys (i, 0): the XOR of two keys determines the
        // unordered pair, and (a,b) always shares a class with (b,a)
        std::vector<Key> keys;
        for (std::uint64_t i = 0; i < 8; ++i) keys.push_back(make_key(kSpec, {i, 0}));
        const auto pc = pair_xor_classes(kSpec, keys);
        REQUIRE(pc.identity_size == 8);
        REQUIRE(pc.sizes.front() == 8);
        for (std::size_t i = 1; i < pc.sizes.size(); ++i) REQUIRE(pc.sizes[i] == 2);
        REQUIRE(pc.class_count == 1 + 8 * 7 / 2);
    }

    SECTION("grid: sum of squared sizes equals the 4-tuple zero-XOR count") {
        const auto g = grid_keys(kSpec, iota_vals(4), iota_vals(4));
        const auto pc = pair_xor_classes(kSpec, g);
        std::vector<std::vector<Key>> sets(4, g);
        const auto zc = count_zero_xor_tuples(kSpec, sets);
        REQUIRE(pc.sum_squares == zc.count);
        REQUIRE(static_cast<double>(pc.sum_squares) <=
                std::pow(3.0, kSpec.c) * g.size() * g.size() + 1e-9);
    }

    SECTION("cap") {
        const auto keys = random_distinct_keys(kSpec, 20, 5);
        REQUIRE_THROWS_AS(pair_xor_classes(kSpec, keys, 10), resource_error);
    }
}
