#include <catch2/catch_amalgamated.hpp>

#include "tabhash/loadgraph.hpp"
#include "tabhash/selftest.hpp"
#include "tabhash/witness_trees.hpp"

using namespace tabhash;

namespace {

const KeySpec kSpec{2, 4};

struct Fixture {
    std::vector<Key> keys;
    std::vector<ChoiceSet> choices;
    LoadState state;
    HashGraph graph;
};

Fixture run_fixture(std::vector<ChoiceSet> choices, int d, std::uint64_t g, TieBreak tie,
                    std::uint64_t tie_seed = 0) {
    Fixture fx;
    fx.choices = std::move(choices);
    fx.keys = sequential_keys(fx.choices.size());
    fx.state = allocate_choices(fx.keys, fx.choices, d, g, tie, tie_seed);
    fx.graph = make_graph(d, g, fx.choices, fx.keys);
    return fx;
}

}  // namespace

TEST_CASE("load graph base cases") {
    auto fx = run_fixture({ChoiceSet{{1, 3}}}, 2, 8, TieBreak::AlwaysGoLeft);
    const std::uint64_t v = fx.state.bin_index(0, 1);

    const auto l0 = build_load_graph(fx.state, fx.graph, v, 0, LoadGraphVariant::Plain);
    REQUIRE(l0.edge_ids.empty());

    const auto l1 = build_load_graph(fx.state, fx.graph, v, 1, LoadGraphVariant::Plain);
    REQUIRE(l1.edge_ids == std::vector<std::uint32_t>{0});

    REQUIRE_THROWS_AS(build_load_graph(fx.state, fx.graph, v, 2, LoadGraphVariant::Plain),
                      input_error);
}

TEST_CASE("hand-built B_{2,2} load graph classifies as a 2-nomial tree") {
    // step 0 loads a leaf bin so that step 1 lands in group 1; steps 2-3
    // give the root its two balls with the right sub-structure
    auto fx = run_fixture(
        {
            ChoiceSet{{4, 7}},  // lands (0,4): future leaf-parent c
            ChoiceSet{{4, 2}},  // lands (1,2) = a, its ball edge is {c, a}
            ChoiceSet{{1, 3}},  // lands (0,1) = v, first ball {v, b}
            ChoiceSet{{1, 2}},  // tie at load 1, goes left to v: second ball {v, a}
        },
        2, 8, TieBreak::AlwaysGoLeft);
    const std::uint64_t v = fx.state.bin_index(0, 1);
    REQUIRE(fx.state.loads[v] == 2);

    const auto L = build_load_graph(fx.state, fx.graph, v, 2, LoadGraphVariant::Plain);
    REQUIRE(L.edge_ids == std::vector<std::uint32_t>{1, 2, 3});

    const auto wc = classify_witness(fx.state, fx.graph, L);
    REQUIRE(wc.kind == WitnessKind::DNomial);
    REQUIRE(wc.level == 2);
}

TEST_CASE("hand-built S_2(1) load graph classifies as a Fibonacci tree") {
    // group-0 bin u gets a ball first, so the next key lands in group 1; the
    // Always-Go-Left load graph of that bin pulls u's ball in at the same level
    auto fx = run_fixture(
        {
            ChoiceSet{{2, 6}},  // tie, goes left: u = (0,2), edge {u, x}
            ChoiceSet{{2, 5}},  // u is loaded, lands v = (1,5): edge {u, v}
        },
        2, 8, TieBreak::AlwaysGoLeft);
    const std::uint64_t v = fx.state.bin_index(1, 5);
    REQUIRE(fx.state.loads[v] == 1);

    const auto L = build_load_graph(fx.state, fx.graph, v, 1, LoadGraphVariant::GoLeft);
    REQUIRE(L.edge_ids == std::vector<std::uint32_t>{0, 1});

    const auto wc = classify_witness(fx.state, fx.graph, L);
    REQUIRE(wc.kind == WitnessKind::FibTree);
    REQUIRE(wc.level == 1);
    REQUIRE(wc.group == 2);
}

TEST_CASE("slack-one load graphs resolve through the ball-removal rebuild") {
    // v's level-2 load graph is {v,b},{v,a},{v,b}: three edges, three
    // vertices, slack one; deleting one parallel ball leaves a forest and the
    // level-1 rebuild is a 1-nomial tree
    auto fx = run_fixture(
        {
            ChoiceSet{{1, 4}},  // tie, left: lands v = (0,1), edge {v, a}
            ChoiceSet{{1, 4}},  // v loaded, lands a = (1,4), parallel edge
            ChoiceSet{{1, 6}},  // v loaded, lands b = (1,6), edge {v, b}
            ChoiceSet{{1, 6}},  // tie at one, left: v's second ball {v, b}
        },
        2, 8, TieBreak::AlwaysGoLeft);
    const std::uint64_t v = fx.state.bin_index(0, 1);
    REQUIRE(fx.state.loads[v] == 2);

    const auto L = build_load_graph(fx.state, fx.graph, v, 2, LoadGraphVariant::Plain);
    REQUIRE(slack_of_subset(fx.graph, L.edge_ids) == 1);

    const auto wc = classify_witness(fx.state, fx.graph, L);
    REQUIRE(wc.kind == WitnessKind::DNomial);
    REQUIRE(wc.level == 1);
}

TEST_CASE("sparse scans produce tree witnesses and stay total") {
    SplitMix64 rng(81);
    std::uint64_t dnomial = 0, fibtree = 0, other = 0, slack1 = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const std::uint64_t g = 32;
        const std::uint64_t n = d * g;
        const std::uint64_t m = n;  // average load one: trees dominate
        const int k = 1 + static_cast<int>(rng.below(2));
        const auto choices = random_choice_sets(d, g, m, rng.next());
        const auto keys = sequential_keys(m);
        const bool goleft = rep % 2 == 0;
        const auto st = allocate_choices(
            keys, choices, d, g, goleft ? TieBreak::AlwaysGoLeft : TieBreak::SeededRandom,
            rng.next());
        if (max_load(st) < static_cast<std::uint32_t>(k + 1)) continue;
        const auto G = make_graph(d, g, choices, keys);
        std::uint64_t fullest = 0;
        for (std::uint64_t b = 0; b < st.loads.size(); ++b)
            if (st.loads[b] > st.loads[fullest]) fullest = b;
        const auto L = build_load_graph(
            st, G, fullest, k + 1,
            goleft ? LoadGraphVariant::GoLeft : LoadGraphVariant::Plain);
        if (slack_of_subset(G, L.edge_ids) == 1) ++slack1;
        const auto wc = classify_witness(st, G, L);
        switch (wc.kind) {
            case WitnessKind::DNomial:
                ++dnomial;
                REQUIRE(wc.level >= 1);  // the rare fallback resolves below k
                break;
            case WitnessKind::FibTree:
                ++fibtree;
                REQUIRE(wc.group == G.group_of(fullest) + 1);
                break;
            case WitnessKind::TightFound: break;
            case WitnessKind::Other: ++other; break;
        }
    }
    REQUIRE(other == 0);
    REQUIRE(dnomial > 5);
    REQUIRE(fibtree > 5);
    REQUIRE(slack1 > 0);  // the removal path was actually exercised
}

TEST_CASE("a repeated edge in the load graph yields a tight witness") {
    auto fx = run_fixture({ChoiceSet{{5, 5}}, ChoiceSet{{5, 5}}, ChoiceSet{{5, 5}}}, 2, 8,
                          TieBreak::AlwaysGoLeft);
    const std::uint64_t v = fx.state.bin_index(0, 5);
    REQUIRE(fx.state.loads[v] == 2);

    const auto L = build_load_graph(fx.state, fx.graph, v, 2, LoadGraphVariant::Plain);
    REQUIRE(L.edge_ids.size() == 3);
    REQUIRE(slack_of_subset(fx.graph, L.edge_ids) == 2);

    const auto wc = classify_witness(fx.state, fx.graph, L);
    REQUIRE(wc.kind == WitnessKind::TightFound);
    REQUIRE(wc.tight.has_value());
    REQUIRE(wc.tight->edge_ids.size() == 3);  // the theta itself is minimal
    REQUIRE(wc.tight->slack >= 2);
}

TEST_CASE("load graph heights respect the recursion bounds") {
    SplitMix64 rng(61);
    int checked_plain = 0, checked_goleft = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const std::uint64_t g = 8;
        const std::uint64_t m = 4 * d * g;
        const auto choices = random_choice_sets(d, g, m, rng.next());
        const auto keys = sequential_keys(m);

        const auto plain =
            allocate_choices(keys, choices, d, g, TieBreak::SeededRandom, rng.next());
        const auto agl = allocate_choices(keys, choices, d, g, TieBreak::AlwaysGoLeft);
        const auto G = make_graph(d, g, choices, keys);

        for (int k = 1; k <= 3; ++k) {
            for (std::uint64_t vtx = 0; vtx < d * g; ++vtx) {
                if (plain.loads[vtx] >= static_cast<std::uint32_t>(k) && checked_plain < 400) {
                    const auto L =
                        build_load_graph(plain, G, vtx, k, LoadGraphVariant::Plain);
                    REQUIRE(subgraph_height(G, vtx, L.edge_ids) <= k);
                    ++checked_plain;
                }
                if (agl.loads[vtx] >= static_cast<std::uint32_t>(k) && checked_goleft < 400) {
                    const auto L =
                        build_load_graph(agl, G, vtx, k, LoadGraphVariant::GoLeft);
                    const int i = G.group_of(vtx) + 1;
                    REQUIRE(subgraph_height(G, vtx, L.edge_ids) <= d * (k - 1) + i);
                    ++checked_goleft;
                }
            }
        }
    }
    REQUIRE(checked_plain > 100);
    REQUIRE(checked_goleft > 100);
}

TEST_CASE("dense runs never classify as Other") {
    SplitMix64 rng(71);
    int eligible = 0;
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const std::uint64_t g = 16;
        const std::uint64_t n = d * g;
        const int k = default_witness_k(n, d);
        const std::uint64_t m = static_cast<std::uint64_t>(k + 2) * n;
        const auto choices = random_choice_sets(d, g, m, rng.next());
        const auto keys = sequential_keys(m);
        const bool goleft = rep % 2 == 0;
        const auto tie = goleft ? TieBreak::AlwaysGoLeft : TieBreak::SeededRandom;
        const auto st = allocate_choices(keys, choices, d, g, tie, rng.next());
        if (max_load(st) < static_cast<std::uint32_t>(k + 1)) continue;
        ++eligible;
        const auto G = make_graph(d, g, choices, keys);
        std::uint64_t fullest = 0;
        for (std::uint64_t b = 0; b < st.loads.size(); ++b)
            if (st.loads[b] > st.loads[fullest]) fullest = b;
        const auto L = build_load_graph(
            st, G, fullest, k + 1,
            goleft ? LoadGraphVariant::GoLeft : LoadGraphVariant::Plain);
        const auto wc = classify_witness(st, G, L);
        REQUIRE(wc.kind != WitnessKind::Other);
        if (wc.kind == WitnessKind::TightFound) {
            REQUIRE(wc.tight->slack >= 2);
            // documented empirical regression bound on the extraction size
            REQUIRE(wc.tight->edge_ids.size() <= 4 * (static_cast<std::size_t>(L.k) + 2));
        }
    }
    REQUIRE(eligible > 10);
}

TEST_CASE("extraction handles a triple overlap in one step") {
    // d=3: the third edge (in BFS order from the root) re-uses three
    // already-seen vertices, so the slack jumps from 0 to 2 on a single edge
    const std::vector<ChoiceSet> choices{
        ChoiceSet{{0, 0, 2}},  // {v, a1, a2}
        ChoiceSet{{1, 0, 1}},  // {b1, a1, b2}
        ChoiceSet{{1, 0, 2}},  // {b1, a1, a2}: all three known
    };
    const auto G = make_graph(3, 8, choices, sequential_keys(3));
    REQUIRE(slack_of_subset(G, std::vector<std::uint32_t>{0, 1, 2}) == 2);
    const auto r =
        extract_small_tight_rooted(G, G.vertex_id(0, 0), std::vector<std::uint32_t>{0, 1, 2});
    REQUIRE(r.slack >= 2);
    REQUIRE(r.edge_ids == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("extract_small_tight demands slack") {
    auto fx = run_fixture({ChoiceSet{{0, 0}}, ChoiceSet{{1, 0}}}, 2, 4,
                          TieBreak::AlwaysGoLeft);
    LoadGraph L;
    L.root = fx.state.bin_index(0, 0);
    L.k = 1;
    L.edge_ids = {0, 1};
    REQUIRE_THROWS_AS(extract_small_tight(fx.graph, L), input_error);
}

TEST_CASE("witness tree generators") {
    SECTION("trivial trees") {
        REQUIRE(build_dnomial(2, 0).edges.empty());
        REQUIRE(build_fib_tree(3, 2, 0).edges.empty());
    }

    SECTION("B_{2,3} has seven edges") {
        REQUIRE(build_dnomial(2, 3).edges.size() == 7);
        REQUIRE(build_dnomial(3, 4).edges.size() == (81 - 1) / 2);
    }

    SECTION("Fibonacci tree sizes satisfy their recursion") {
        for (int d : {2, 3}) {
            auto expect = [&](auto&& self, int i, int k) -> std::uint64_t {
                if (k <= 0) return 0;
                std::uint64_t total = 1;
                for (int j = 1; j < i; ++j) total += self(self, j, k);
                for (int j = i; j <= d; ++j) total += self(self, j, k - 1);
                return total;
            };
            for (int i = 1; i <= d; ++i)
                for (int k = 0; k <= 5; ++k)
                    REQUIRE(build_fib_tree(d, i, k).edges.size() == expect(expect, i, k));
        }
    }

    SECTION("generator caps") {
        REQUIRE_THROWS_AS(build_dnomial(3, 20, 1000), resource_error);
        REQUIRE_THROWS_AS(build_fib_tree(2, 1, 40, 1000), resource_error);
    }
}

TEST_CASE("pruning matches the exact formulas") {
    SECTION("pruning at l = k keeps only the root's edges") {
        for (int d : {2, 3})
            for (int k = 1; k <= 4; ++k)
                REQUIRE(prune(build_dnomial(d, k), k).edges.size() ==
                        static_cast<std::size_t>(k));
    }

    SECTION("T_{3,2} for d=2: five edges, two internal nodes") {
        const auto t = prune(build_dnomial(2, 3), 2);
        const auto c = tree_counts(t, 2);
        REQUIRE(c.edges == 5);
        REQUIRE(c.internal_nodes == 2);
        REQUIRE(c.vertices == 6);
    }

    SECTION("P_{1,l}(l) has exactly l edges") {
        for (int d : {2, 3})
            for (int ell = 1; ell <= 4; ++ell)
                REQUIRE(prune(build_fib_tree(d, 1, ell), ell).edges.size() ==
                        static_cast<std::size_t>(ell));
    }

    SECTION("validate_counts over the working range") {
        for (int d : {2, 3})
            for (int k = 1; k <= 5; ++k)
                for (int ell = 1; ell <= k; ++ell) {
                    REQUIRE(validate_counts(WitnessShape{d, k, ell, 0}));
                    for (int i = 1; i <= d; ++i)
                        REQUIRE(validate_counts(WitnessShape{d, k, ell, i}));
                }
    }
}
