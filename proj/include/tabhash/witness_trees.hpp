#pragma once

// Abstract witness trees. B_{d,k} is the d-nomial tree (plain d-choice
// witness); S_i(k) is the d-ary Fibonacci tree (Always-Go-Left witness for a
// group-i root). l-pruning removes every subtree rooted at a vertex with
// fewer than (d-1)*l children; the pruned trees have exact edge, vertex and
// internal-node counts that validate_counts checks against the constructions.

#include <cstdint>
#include <map>
#include <vector>

#include "tabhash/common.hpp"
#include "tabhash/fibonacci.hpp"

namespace tabhash {

struct TreeEdge {
    int top = 0;
    std::vector<int> children;
    std::vector<int> child_groups;  // 1-based group labels; empty for B trees
};

struct RootedTree {
    int d = 0;
    int root = 0;
    int node_count = 1;
    std::vector<TreeEdge> edges;
    std::vector<std::vector<int>> child_edges;  // per node, indices into edges

    int new_node() {
        child_edges.emplace_back();
        return node_count++;
    }
};

inline constexpr std::uint64_t kTreeEdgeCap = 1'000'000;

inline RootedTree build_dnomial(int d, int k, std::uint64_t edge_cap = kTreeEdgeCap) {
    if (d < 2) throw input_error("build_dnomial: d must be >= 2");
    if (k < 0) throw input_error("build_dnomial: k must be >= 0");
    RootedTree t;
    t.d = d;
    t.child_edges.emplace_back();
    // B_k at a node: one edge to d-1 fresh children each rooting B_{k-1},
    // plus a B_{k-1} at the node itself.
    auto grow = [&](auto&& self, int node, int level) -> void {
        if (level == 0) return;
        if (t.edges.size() >= edge_cap)
            throw resource_error("build_dnomial: edge cap exceeded");
        TreeEdge e;
        e.top = node;
        for (int j = 1; j < d; ++j) e.children.push_back(t.new_node());
        const int eid = static_cast<int>(t.edges.size());
        t.edges.push_back(e);
        t.child_edges[node].push_back(eid);
        for (int child : t.edges[eid].children) self(self, child, level - 1);
        self(self, node, level - 1);
    };
    grow(grow, t.root, k);
    return t;
}

inline RootedTree build_fib_tree(int d, int i, int k, std::uint64_t edge_cap = kTreeEdgeCap) {
    if (d < 2) throw input_error("build_fib_tree: d must be >= 2");
    if (i < 1 || i > d) throw input_error("build_fib_tree: group index must be in [1,d]");
    if (k < 0) throw input_error("build_fib_tree: k must be >= 0");
    RootedTree t;
    t.d = d;
    t.child_edges.emplace_back();
    // S_i(k): one edge whose group-j child roots S_j(k) for j < i and
    // S_j(k-1) for j > i, plus an S_i(k-1) at the node itself.
    auto grow = [&](auto&& self, int node, int group, int level) -> void {
        if (level == 0) return;
        if (t.edges.size() >= edge_cap)
            throw resource_error("build_fib_tree: edge cap exceeded");
        TreeEdge e;
        e.top = node;
        for (int j = 1; j <= d; ++j) {
            if (j == group) continue;
            e.children.push_back(t.new_node());
            e.child_groups.push_back(j);
        }
        const int eid = static_cast<int>(t.edges.size());
        t.edges.push_back(e);
        t.child_edges[node].push_back(eid);
        for (std::size_t c = 0; c < t.edges[eid].children.size(); ++c) {
            const int child = t.edges[eid].children[c];
            const int j = t.edges[eid].child_groups[c];
            self(self, child, j, j < group ? level : level - 1);
        }
        self(self, node, group, level - 1);
    };
    grow(grow, t.root, i, k);
    return t;
}

// Iterated removal: while some vertex has fewer than (d-1)*l children (and
// still owns edges), drop the edges of the subtree rooted there.
inline RootedTree prune(const RootedTree& tree, int ell) {
    if (ell < 0) throw input_error("prune: l must be >= 0");
    std::vector<char> removed(tree.edges.size(), 0);

    auto remove_subtree = [&](auto&& self, int node) -> void {
        for (int eid : tree.child_edges[node]) {
            if (removed[eid]) continue;
            removed[eid] = 1;
            for (int child : tree.edges[eid].children) self(self, child);
        }
    };

    const std::uint64_t threshold = static_cast<std::uint64_t>(tree.d - 1) * ell;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int node = 0; node < tree.node_count; ++node) {
            std::uint64_t kids = 0;
            bool owns = false;
            for (int eid : tree.child_edges[node]) {
                if (removed[eid]) continue;
                owns = true;
                kids += tree.edges[eid].children.size();
            }
            if (owns && kids < threshold) {
                remove_subtree(remove_subtree, node);
                changed = true;
            }
        }
    }

    RootedTree out;
    out.d = tree.d;
    out.root = tree.root;
    out.node_count = tree.node_count;
    out.child_edges.assign(tree.node_count, {});
    for (std::size_t eid = 0; eid < tree.edges.size(); ++eid) {
        if (removed[eid]) continue;
        out.child_edges[tree.edges[eid].top].push_back(static_cast<int>(out.edges.size()));
        out.edges.push_back(tree.edges[eid]);
    }
    return out;
}

struct TreeCounts {
    std::uint64_t edges = 0;
    std::uint64_t vertices = 0;        // vertices incident to at least one edge
    std::uint64_t internal_nodes = 0;  // nodes with at least one child edge
    std::uint64_t leaf_parents = 0;    // nodes with >= l all-leaf child edges
};

inline TreeCounts tree_counts(const RootedTree& tree, int ell) {
    TreeCounts c;
    c.edges = tree.edges.size();
    std::vector<char> touched(tree.node_count, 0);
    for (const TreeEdge& e : tree.edges) {
        touched[e.top] = 1;
        for (int child : e.children) touched[child] = 1;
    }
    for (char t : touched) c.vertices += t;
    for (int node = 0; node < tree.node_count; ++node) {
        if (tree.child_edges[node].empty()) continue;
        ++c.internal_nodes;
        std::uint64_t all_leaf_edges = 0;
        for (int eid : tree.child_edges[node]) {
            bool all_leaves = true;
            for (int child : tree.edges[eid].children)
                if (!tree.child_edges[child].empty()) all_leaves = false;
            if (all_leaves) ++all_leaf_edges;
        }
        if (all_leaf_edges >= static_cast<std::uint64_t>(ell)) ++c.leaf_parents;
    }
    return c;
}

// ---- exact count formulas ---------------------------------------------------------

inline std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

inline std::uint64_t pruned_dnomial_edges(int d, int k, int ell) {
    const std::uint64_t p = ipow(d, k - ell);
    return static_cast<std::uint64_t>(ell) * p + (p - 1) / (d - 1);
}

inline std::uint64_t pruned_dnomial_vertices(int d, int k, int ell) {
    return (static_cast<std::uint64_t>(d - 1) * ell + 1) * ipow(d, k - ell);
}

inline std::uint64_t pruned_dnomial_internal(int d, int k, int ell) {
    return ipow(d, k - ell);
}

// Pruned Fibonacci tree edge count: l*2^(i-1) at k = l, then the one-edge
// recursion over earlier groups at level k and later groups at level k-1.
inline std::uint64_t pruned_fib_edges(int d, int i, int k, int ell) {
    if (k < ell) return 0;
    if (k == ell) return static_cast<std::uint64_t>(ell) << (i - 1);
    std::uint64_t total = 1;
    for (int j = 1; j < i; ++j) total += pruned_fib_edges(d, j, k, ell);
    for (int j = i; j <= d; ++j) total += pruned_fib_edges(d, j, k - 1, ell);
    return total;
}

inline std::uint64_t pruned_fib_leaf_parents(int d, int i, int k, int ell) {
    if (k < ell) return 0;
    return DaryFibonacci(d).value(d * (k - ell) + i);
}

// Parameters of one witness shape; i == 0 selects the d-nomial family.
struct WitnessShape {
    int d = 2;
    int k = 0;
    int ell = 0;
    int i = 0;

    std::uint64_t expected_edges() const {
        return i == 0 ? pruned_dnomial_edges(d, k, ell) : pruned_fib_edges(d, i, k, ell);
    }
    std::uint64_t expected_internal() const {
        return i == 0 ? pruned_dnomial_internal(d, k, ell)
                      : pruned_fib_leaf_parents(d, i, k, ell);
    }
};

// Builds the tree, prunes it, and compares every count the formulas pin
// down; for the Fibonacci family this includes the d-ary Fibonacci sandwich
// on the edge count.
inline bool validate_counts(const WitnessShape& shape) {
    if (shape.ell < 1 || shape.ell > shape.k)
        throw input_error("validate_counts: requires 1 <= l <= k");
    if (shape.i == 0) {
        const RootedTree pruned = prune(build_dnomial(shape.d, shape.k), shape.ell);
        const TreeCounts c = tree_counts(pruned, shape.ell);
        return c.edges == pruned_dnomial_edges(shape.d, shape.k, shape.ell) &&
               c.vertices == pruned_dnomial_vertices(shape.d, shape.k, shape.ell) &&
               c.internal_nodes == pruned_dnomial_internal(shape.d, shape.k, shape.ell) &&
               c.leaf_parents == c.internal_nodes;
    }
    const RootedTree pruned = prune(build_fib_tree(shape.d, shape.i, shape.k), shape.ell);
    const TreeCounts c = tree_counts(pruned, shape.ell);
    if (c.edges != pruned_fib_edges(shape.d, shape.i, shape.k, shape.ell)) return false;
    if (c.leaf_parents != pruned_fib_leaf_parents(shape.d, shape.i, shape.k, shape.ell))
        return false;
    if (shape.ell >= 1) {
        DaryFibonacci fib(shape.d);
        const int base = shape.d * (shape.k - shape.ell) + shape.i;
        const std::uint64_t lo = static_cast<std::uint64_t>(shape.ell) * fib.value(base + 1);
        const std::uint64_t hi = static_cast<std::uint64_t>(shape.ell) * fib.value(base + 2);
        if (c.edges < lo || c.edges > hi) return false;
    }
    return true;
}

}  // namespace tabhash
