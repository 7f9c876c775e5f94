#pragma once

// The hash graph: a d-uniform, d-partite hypergraph on (group, bin) vertices
// with one edge per key. Structural analyses: connected components, the tree
// characterisation, tight subgraphs (|V| <= (d-1)|E| - 1), and double cycles
// (the minimal cuckoo obstructions).
//
// Cycle convention: a hypergraph cycle is an edge sequence (e_1..e_t), t >= 3,
// where cyclically consecutive edges share exactly one vertex, non-adjacent
// edges are disjoint, and the t link vertices are pairwise distinct. Edge
// pairs with |e1 ^ e2| >= 2 are tracked separately (the "edge-pair clause" of
// the tree characterisation); pairs sharing exactly two vertices additionally
// act as 2-cycles during double-cycle assembly, which is the classical
// multigraph reading needed for d = 2 parallel edges.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tabhash/allocation.hpp"
#include "tabhash/common.hpp"
#include "tabhash/keys.hpp"
#include "tabhash/tabulation.hpp"

namespace tabhash {

struct GraphEdge {
    Key key;
    std::vector<std::uint32_t> choice;  // choice[i] < g, group i
};

struct HashGraph {
    int d = 0;
    std::uint64_t g = 0;
    std::vector<GraphEdge> edges;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> incident;

    std::uint64_t vertex_id(int group, std::uint32_t bin) const {
        return static_cast<std::uint64_t>(group) * g + bin;
    }
    std::vector<std::uint64_t> edge_vertices(std::uint32_t e) const {
        std::vector<std::uint64_t> v(d);
        for (int i = 0; i < d; ++i) v[i] = vertex_id(i, edges[e].choice[i]);
        return v;
    }
    int group_of(std::uint64_t vertex) const { return static_cast<int>(vertex / g); }
};

inline HashGraph make_graph(int d, std::uint64_t g, std::span<const ChoiceSet> choices,
                            std::span<const Key> keys) {
    if (keys.size() != choices.size())
        throw input_error("make_graph: keys/choices length mismatch");
    HashGraph G;
    G.d = d;
    G.g = g;
    G.edges.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (static_cast<int>(choices[i].bins.size()) != d)
            throw input_error("make_graph: choice arity mismatch");
        for (std::uint32_t b : choices[i].bins)
            if (b >= g) throw input_error("make_graph: bin choice out of range");
        G.edges.push_back(GraphEdge{keys[i], choices[i].bins});
        for (int grp = 0; grp < d; ++grp)
            G.incident[G.vertex_id(grp, choices[i].bins[grp])].push_back(
                static_cast<std::uint32_t>(i));
    }
    return G;
}

inline HashGraph build_graph(std::span<const Key> keys, const TabulationFn& f, int d,
                             int bin_bits) {
    const auto choices = derive_all_choices(keys, f, d, bin_bits);
    return make_graph(d, 1ULL << bin_bits, choices, keys);
}

// ---- subgraph bookkeeping ----------------------------------------------------

inline std::vector<std::uint64_t> vertices_of_subset(const HashGraph& G,
                                                     std::span<const std::uint32_t> edges) {
    std::vector<std::uint64_t> vs;
    vs.reserve(edges.size() * G.d);
    for (std::uint32_t e : edges)
        for (auto v : G.edge_vertices(e)) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

// slack = (d-1)|E| + 1 - |V|; 0 on trees, >= 2 exactly on tight subgraphs.
inline std::int64_t slack_of_subset(const HashGraph& G,
                                    std::span<const std::uint32_t> edges) {
    const auto vs = vertices_of_subset(G, edges);
    return static_cast<std::int64_t>(G.d - 1) * static_cast<std::int64_t>(edges.size()) +
           1 - static_cast<std::int64_t>(vs.size());
}

inline bool subset_connected(const HashGraph& G, std::span<const std::uint32_t> edges) {
    if (edges.empty()) return true;
    std::set<std::uint32_t> in(edges.begin(), edges.end());
    std::map<std::uint64_t, std::vector<std::uint32_t>> touch;
    for (std::uint32_t e : edges)
        for (auto v : G.edge_vertices(e)) touch[v].push_back(e);
    std::set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{edges.front()};
    seen.insert(edges.front());
    while (!stack.empty()) {
        std::uint32_t e = stack.back();
        stack.pop_back();
        for (auto v : G.edge_vertices(e))
            for (std::uint32_t o : touch[v])
                if (seen.insert(o).second) stack.push_back(o);
    }
    return seen.size() == in.size();
}

// Connected components as sorted edge-id lists, ordered by smallest edge id.
inline std::vector<std::vector<std::uint32_t>> graph_components(const HashGraph& G) {
    std::vector<std::vector<std::uint32_t>> comps;
    std::vector<char> seen(G.edges.size(), 0);
    for (std::uint32_t start = 0; start < G.edges.size(); ++start) {
        if (seen[start]) continue;
        std::vector<std::uint32_t> comp;
        std::vector<std::uint32_t> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            std::uint32_t e = stack.back();
            stack.pop_back();
            comp.push_back(e);
            for (auto v : G.edge_vertices(e))
                for (std::uint32_t o : G.incident.at(v))
                    if (!seen[o]) {
                        seen[o] = 1;
                        stack.push_back(o);
                    }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// ---- cycles and edge pairs ----------------------------------------------------

inline std::vector<std::uint64_t> edge_intersection(const HashGraph& G, std::uint32_t a,
                                                    std::uint32_t b) {
    std::vector<std::uint64_t> out;
    const auto va = G.edge_vertices(a);
    const auto vb = G.edge_vertices(b);
    for (auto x : va)
        for (auto y : vb)
            if (x == y) out.push_back(x);
    return out;
}

inline bool has_multi_intersection_pair(const HashGraph& G,
                                        std::span<const std::uint32_t> edges) {
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j)
            if (edge_intersection(G, edges[i], edges[j]).size() >= 2) return true;
    return false;
}

struct CycleStruct {
    std::vector<std::uint32_t> edges;     // in cycle order
    std::vector<std::uint64_t> vertices;  // sorted union
};

namespace detail {

// DFS enumeration of hypergraph cycles (t >= 3) inside an edge subset,
// canonicalised so every cycle is reported once: smallest edge id first,
// second edge id smaller than the closing one. The visitor returns false to
// stop. Worst case is exponential; the budget guards against pathological
// inputs (the intended scale is small diagnostic subgraphs).
template <typename Visitor>
inline void enumerate_cycles(const HashGraph& G, std::span<const std::uint32_t> subset,
                             Visitor&& visit, std::uint64_t budget) {
    std::vector<std::uint32_t> edges(subset.begin(), subset.end());
    std::sort(edges.begin(), edges.end());
    std::set<std::uint32_t> in(edges.begin(), edges.end());
    std::uint64_t steps = 0;
    bool stop = false;

    std::vector<std::uint32_t> seq;
    std::vector<std::uint64_t> links;  // link vertex i joins seq[i] and seq[i+1]
    std::vector<std::vector<std::uint64_t>> seq_verts;

    auto shares_any = [&](const std::vector<std::uint64_t>& a,
                          const std::vector<std::uint64_t>& b) {
        for (auto x : a)
            for (auto y : b)
                if (x == y) return true;
        return false;
    };

    auto dfs = [&](auto&& self) -> void {
        if (stop) return;
        if (++steps > budget)
            throw resource_error("enumerate_cycles: step budget exceeded");
        const auto last = seq_verts.back();
        for (std::uint32_t cand : edges) {
            if (stop) return;
            if (cand <= seq.front()) continue;
            bool used = false;
            for (std::uint32_t s : seq)
                if (s == cand) used = true;
            if (used) continue;
            const auto cv = G.edge_vertices(cand);
            // exactly one fresh shared vertex with the last edge
            std::vector<std::uint64_t> inter;
            for (auto x : cv)
                for (auto y : last)
                    if (x == y) inter.push_back(x);
            if (inter.size() != 1) continue;
            const std::uint64_t link = inter.front();
            if (std::find(links.begin(), links.end(), link) != links.end()) continue;
            // disjoint from all interior edges
            bool bad = false;
            for (std::size_t k = 1; k + 1 < seq.size(); ++k)
                if (shares_any(cv, seq_verts[k])) {
                    bad = true;
                    break;
                }
            if (bad) continue;
            // once the sequence has two edges, any intersection with the
            // first edge can only mean a closing edge
            if (seq.size() >= 2) {
                std::vector<std::uint64_t> head;
                for (auto x : cv)
                    for (auto y : seq_verts.front())
                        if (x == y) head.push_back(x);
                if (!head.empty()) {
                    if (head.size() == 1 && head.front() != link &&
                        std::find(links.begin(), links.end(), head.front()) ==
                            links.end() &&
                        seq[1] < cand) {
                        CycleStruct c;
                        c.edges = seq;
                        c.edges.push_back(cand);
                        c.vertices = vertices_of_subset(G, c.edges);
                        if (!visit(c)) {
                            stop = true;
                            return;
                        }
                    }
                    continue;
                }
            }
            seq.push_back(cand);
            links.push_back(link);
            seq_verts.push_back(cv);
            self(self);
            seq.pop_back();
            links.pop_back();
            seq_verts.pop_back();
        }
    };

    for (std::uint32_t start : edges) {
        if (stop) return;
        seq.assign(1, start);
        links.clear();
        seq_verts.assign(1, G.edge_vertices(start));
        dfs(dfs);
    }
}

}  // namespace detail

// True iff the subset contains a hypergraph cycle in the strict (t >= 3) sense.
inline bool contains_hypergraph_cycle(const HashGraph& G,
                                      std::span<const std::uint32_t> edges,
                                      std::uint64_t budget = 5'000'000) {
    bool found = false;
    detail::enumerate_cycles(
        G, edges,
        [&](const CycleStruct&) {
            found = true;
            return false;
        },
        budget);
    return found;
}

// ---- classification ------------------------------------------------------------

enum class SubgraphClass { Tree, Forest, Tight, DoubleCycleD1, DoubleCycleD2, Other };

inline const char* subgraph_class_name(SubgraphClass c) {
    switch (c) {
        case SubgraphClass::Tree: return "tree";
        case SubgraphClass::Forest: return "forest";
        case SubgraphClass::Tight: return "tight";
        case SubgraphClass::DoubleCycleD1: return "double-cycle-d1";
        case SubgraphClass::DoubleCycleD2: return "double-cycle-d2";
        case SubgraphClass::Other: return "other";
    }
    return "?";
}

struct SubgraphReport {
    std::vector<std::uint64_t> vertices;
    std::vector<std::uint32_t> edge_ids;
    SubgraphClass cls = SubgraphClass::Other;
    std::int64_t slack = 0;
};

inline nlohmann::json subgraph_to_json(const HashGraph& G, const SubgraphReport& r) {
    nlohmann::json j;
    j["classification"] = subgraph_class_name(r.cls);
    j["slack"] = r.slack;
    j["vertices"] = nlohmann::json::array();
    for (auto v : r.vertices)
        j["vertices"].push_back({G.group_of(v), v % G.g});
    j["edge_keys"] = nlohmann::json::array();
    j["edge_ids"] = nlohmann::json::array();
    for (auto e : r.edge_ids) {
        j["edge_keys"].push_back(G.edges[e].key.packed);
        j["edge_ids"].push_back(e);
    }
    return j;
}

std::optional<SubgraphReport> find_double_cycle_in(const HashGraph& G,
                                                   std::span<const std::uint32_t> comp,
                                                   std::uint64_t budget);

// Classify a connected edge set per the slack invariants, refining tight sets
// that are exactly a double cycle. Disconnected sets report Forest when every
// component is a tree, Other otherwise.
inline SubgraphReport classify_edge_set(const HashGraph& G,
                                        std::vector<std::uint32_t> edges,
                                        bool refine_double_cycles = true) {
    std::sort(edges.begin(), edges.end());
    SubgraphReport r;
    r.vertices = vertices_of_subset(G, edges);
    r.slack = static_cast<std::int64_t>(G.d - 1) * static_cast<std::int64_t>(edges.size()) +
              1 - static_cast<std::int64_t>(r.vertices.size());
    r.edge_ids = std::move(edges);

    if (!subset_connected(G, r.edge_ids)) {
        // Forest iff every connected piece is a tree; equivalently the total
        // vertex count matches the tree count for every component.
        std::vector<char> seen(r.edge_ids.size(), 0);
        bool all_trees = true;
        std::map<std::uint64_t, std::vector<std::size_t>> touch;
        for (std::size_t i = 0; i < r.edge_ids.size(); ++i)
            for (auto v : G.edge_vertices(r.edge_ids[i])) touch[v].push_back(i);
        for (std::size_t i = 0; i < r.edge_ids.size() && all_trees; ++i) {
            if (seen[i]) continue;
            std::vector<std::uint32_t> comp;
            std::vector<std::size_t> stack{i};
            seen[i] = 1;
            while (!stack.empty()) {
                std::size_t e = stack.back();
                stack.pop_back();
                comp.push_back(r.edge_ids[e]);
                for (auto v : G.edge_vertices(r.edge_ids[e]))
                    for (std::size_t o : touch[v])
                        if (!seen[o]) {
                            seen[o] = 1;
                            stack.push_back(o);
                        }
            }
            if (slack_of_subset(G, comp) != 0) all_trees = false;
        }
        r.cls = all_trees ? SubgraphClass::Forest : SubgraphClass::Other;
        return r;
    }

    if (r.slack == 0) {
        r.cls = SubgraphClass::Tree;
    } else if (r.slack >= 2) {
        r.cls = SubgraphClass::Tight;
        if (refine_double_cycles && r.edge_ids.size() <= 32) {
            try {
                auto dc = find_double_cycle_in(G, r.edge_ids, 2'000'000);
                if (dc && dc->edge_ids.size() == r.edge_ids.size()) r.cls = dc->cls;
            } catch (const resource_error&) {
                // refinement is informational; Tight stands
            }
        }
    } else {
        r.cls = SubgraphClass::Other;  // connected, exactly one cycle's worth of slack
    }
    return r;
}

// Per-component reports. The tree verdicts are cross-validated against the
// cycle / edge-pair characterisation; disagreement means a broken invariant.
inline std::vector<SubgraphReport> component_stats(const HashGraph& G,
                                                   bool refine_double_cycles = true) {
    std::vector<SubgraphReport> out;
    for (auto& comp : graph_components(G)) {
        SubgraphReport r = classify_edge_set(G, comp, refine_double_cycles);
        const bool tree_by_count = r.slack == 0;
        const bool tree_by_shape = !has_multi_intersection_pair(G, r.edge_ids) &&
                                   !contains_hypergraph_cycle(G, r.edge_ids);
        if (tree_by_count != tree_by_shape)
            throw input_error("component_stats: tree characterisation mismatch");
        out.push_back(std::move(r));
    }
    return out;
}

// ---- tight subgraph search ------------------------------------------------------

// Minimal-size connected tight subgraph, found by growing connected edge sets
// by adjacency, size by size. Slack never decreases when a connected set
// grows, so components with slack < 2 cannot contain a tight subgraph and are
// skipped outright.
inline std::optional<SubgraphReport> find_tight_subgraph(const HashGraph& G,
                                                         int max_edges = 24,
                                                         std::uint64_t budget = 4'000'000) {
    if (max_edges < 1 || max_edges > 24)
        throw config_error("find_tight_subgraph: max_edges must be in [1,24]");
    std::uint64_t visited = 0;
    bool truncated = false;

    std::optional<SubgraphReport> best;
    for (auto& comp : graph_components(G)) {
        if (slack_of_subset(G, comp) < 2) continue;
        if (best && best->edge_ids.size() <= 1) break;

        std::set<std::vector<std::uint32_t>> frontier;
        for (std::uint32_t e : comp) frontier.insert({e});
        for (int size = 1; size <= max_edges && !frontier.empty(); ++size) {
            if (best && static_cast<int>(best->edge_ids.size()) <= size) break;
            std::set<std::vector<std::uint32_t>> next;
            for (const auto& sub : frontier) {
                if (++visited > budget) {
                    truncated = true;
                    break;
                }
                if (slack_of_subset(G, sub) >= 2) {
                    SubgraphReport r = classify_edge_set(G, sub);
                    if (!best || r.edge_ids.size() < best->edge_ids.size()) best = r;
                    break;  // minimal for this component at this size
                }
                if (size == max_edges) continue;
                std::set<std::uint32_t> in(sub.begin(), sub.end());
                for (std::uint32_t e : sub) {
                    for (auto v : G.edge_vertices(e)) {
                        for (std::uint32_t o : G.incident.at(v)) {
                            if (in.count(o)) continue;
                            auto grown = sub;
                            grown.insert(std::lower_bound(grown.begin(), grown.end(), o), o);
                            next.insert(std::move(grown));
                        }
                    }
                }
            }
            if (truncated) break;
            frontier = std::move(next);
        }
        if (truncated) break;
    }
    if (best) return best;
    if (truncated)
        throw resource_error(
            "find_tight_subgraph: budget exceeded; no tight subgraph found within the "
            "explored sizes");
    return std::nullopt;
}

// ---- double cycles ---------------------------------------------------------------

namespace detail {

// Cycle-like structures usable in double-cycle assembly: strict cycles plus
// 2-intersecting edge pairs acting as 2-cycles (parallel edges for d = 2).
inline std::vector<CycleStruct> assembly_cycles(const HashGraph& G,
                                                std::span<const std::uint32_t> comp,
                                                std::uint64_t budget) {
    std::vector<CycleStruct> cycles;
    for (std::size_t i = 0; i < comp.size(); ++i)
        for (std::size_t j = i + 1; j < comp.size(); ++j)
            if (edge_intersection(G, comp[i], comp[j]).size() == 2) {
                CycleStruct c;
                c.edges = {comp[i], comp[j]};
                c.vertices = vertices_of_subset(G, c.edges);
                cycles.push_back(std::move(c));
            }
    enumerate_cycles(
        G, comp,
        [&](const CycleStruct& c) {
            cycles.push_back(c);
            return cycles.size() < 4096;
        },
        budget);
    std::sort(cycles.begin(), cycles.end(), [](const CycleStruct& a, const CycleStruct& b) {
        if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
        return a.edges < b.edges;
    });
    return cycles;
}

inline std::size_t count_in(const std::vector<std::uint64_t>& sorted_vs,
                            const std::vector<std::uint64_t>& vs) {
    std::size_t n = 0;
    for (auto v : vs)
        if (std::binary_search(sorted_vs.begin(), sorted_vs.end(), v)) ++n;
    return n;
}

}  // namespace detail

// Searches one component for a D1/D2 double cycle; exact on the small
// diagnostic graphs this is meant for.
inline std::optional<SubgraphReport> find_double_cycle_in(const HashGraph& G,
                                                          std::span<const std::uint32_t> comp,
                                                          std::uint64_t budget) {
    if (slack_of_subset(G, comp) < 2) return std::nullopt;
    const auto cycles = detail::assembly_cycles(G, comp, budget);
    if (cycles.empty()) return std::nullopt;

    auto finish = [&](std::vector<std::uint32_t> edges, SubgraphClass cls)
        -> std::optional<SubgraphReport> {
        std::sort(edges.begin(), edges.end());
        SubgraphReport r;
        r.vertices = vertices_of_subset(G, edges);
        r.slack = static_cast<std::int64_t>(G.d - 1) *
                      static_cast<std::int64_t>(edges.size()) +
                  1 - static_cast<std::int64_t>(r.vertices.size());
        if (r.slack != 2) return std::nullopt;  // every double cycle has slack 2
        r.edge_ids = std::move(edges);
        r.cls = cls;
        return r;
    };

    // D2, chord form: a cycle plus one edge meeting it in exactly two vertices.
    for (const auto& C : cycles) {
        for (std::uint32_t x : comp) {
            if (std::find(C.edges.begin(), C.edges.end(), x) != C.edges.end()) continue;
            if (detail::count_in(C.vertices, G.edge_vertices(x)) == 2) {
                auto edges = C.edges;
                edges.push_back(x);
                if (auto r = finish(std::move(edges), SubgraphClass::DoubleCycleD2)) return r;
            }
        }
    }

    // Path attachment DFS shared by D2 (back to the same cycle) and D1
    // (between two disjoint cycles). Path axioms: consecutive edges share one
    // fresh vertex, everything else disjoint. Edges after the first avoid the
    // source cycle; an edge touching the target cycle can only be the last.
    auto find_path = [&](const std::vector<std::uint64_t>& from_vs,
                         const std::vector<std::uint64_t>& to_vs,
                         const std::vector<std::uint32_t>& forbidden_edges,
                         bool same_cycle) -> std::optional<std::vector<std::uint32_t>> {
        std::set<std::uint32_t> forbidden(forbidden_edges.begin(), forbidden_edges.end());
        std::vector<std::uint32_t> path;
        std::vector<std::vector<std::uint64_t>> pverts;
        std::vector<std::uint64_t> links;
        std::uint64_t start_attach = 0;
        std::optional<std::vector<std::uint32_t>> found;
        std::uint64_t steps = 0;

        auto dfs = [&](auto&& self) -> void {
            if (found || ++steps > budget) return;
            const auto lastv = pverts.back();
            const std::size_t hit_to = detail::count_in(to_vs, lastv);
            if (hit_to == 1) {
                std::uint64_t attach = 0;
                for (auto v : lastv)
                    if (std::binary_search(to_vs.begin(), to_vs.end(), v)) attach = v;
                const bool len_ok = same_cycle ? path.size() >= 2 : path.size() >= 1;
                if (len_ok && (!same_cycle || attach != start_attach)) {
                    found = path;
                    return;
                }
            }
            // Only the first edge may sit on a cycle and still be extended.
            if (path.size() > 1 &&
                (hit_to > 0 || detail::count_in(from_vs, lastv) > 0))
                return;
            for (std::uint32_t cand : comp) {
                if (found) return;
                if (forbidden.count(cand)) continue;
                if (std::find(path.begin(), path.end(), cand) != path.end()) continue;
                const auto cv = G.edge_vertices(cand);
                std::vector<std::uint64_t> inter;
                for (auto x : cv)
                    for (auto y : lastv)
                        if (x == y) inter.push_back(x);
                if (inter.size() != 1) continue;
                if (std::find(links.begin(), links.end(), inter.front()) != links.end())
                    continue;
                bool bad = false;
                for (std::size_t k = 0; k + 1 < path.size() && !bad; ++k)
                    for (auto x : cv)
                        for (auto y : pverts[k])
                            if (x == y) bad = true;
                if (bad) continue;
                // Candidates may touch the target cycle only as a potential
                // closing edge, and never re-touch the source cycle.
                if (!same_cycle && detail::count_in(from_vs, cv) != 0) continue;
                if (detail::count_in(to_vs, cv) > 1) continue;
                path.push_back(cand);
                pverts.push_back(cv);
                links.push_back(inter.front());
                self(self);
                if (found) return;
                path.pop_back();
                pverts.pop_back();
                links.pop_back();
            }
        };

        // start edges: exactly one vertex on the source cycle
        for (std::uint32_t s : comp) {
            if (found) break;
            if (forbidden.count(s)) continue;
            const auto sv = G.edge_vertices(s);
            if (detail::count_in(from_vs, sv) != 1) continue;
            if (!same_cycle && detail::count_in(to_vs, sv) > 1) continue;
            for (auto v : sv)
                if (std::binary_search(from_vs.begin(), from_vs.end(), v)) start_attach = v;
            path.assign(1, s);
            pverts.assign(1, sv);
            links.clear();
            dfs(dfs);
        }
        return found;
    };

    // D2, path form: a path of length >= 2 leaving and re-entering one cycle.
    for (const auto& C : cycles) {
        if (auto p = find_path(C.vertices, C.vertices, C.edges, /*same_cycle=*/true)) {
            auto edges = C.edges;
            edges.insert(edges.end(), p->begin(), p->end());
            if (auto r = finish(std::move(edges), SubgraphClass::DoubleCycleD2)) return r;
        }
    }

    // D1: two cycles sharing exactly one vertex, or vertex-disjoint cycles
    // joined by a path.
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        for (std::size_t j = i + 1; j < cycles.size(); ++j) {
            const auto& A = cycles[i];
            const auto& B = cycles[j];
            std::vector<std::uint64_t> shared;
            std::set_intersection(A.vertices.begin(), A.vertices.end(), B.vertices.begin(),
                                  B.vertices.end(), std::back_inserter(shared));
            bool edge_overlap = false;
            for (auto e : A.edges)
                if (std::find(B.edges.begin(), B.edges.end(), e) != B.edges.end())
                    edge_overlap = true;
            if (edge_overlap) continue;
            if (shared.size() == 1) {
                auto edges = A.edges;
                edges.insert(edges.end(), B.edges.begin(), B.edges.end());
                if (auto r = finish(std::move(edges), SubgraphClass::DoubleCycleD1)) return r;
            } else if (shared.empty()) {
                auto forbidden = A.edges;
                forbidden.insert(forbidden.end(), B.edges.begin(), B.edges.end());
                if (auto p = find_path(A.vertices, B.vertices, forbidden,
                                       /*same_cycle=*/false)) {
                    auto edges = std::move(forbidden);
                    edges.insert(edges.end(), p->begin(), p->end());
                    if (auto r = finish(std::move(edges), SubgraphClass::DoubleCycleD1))
                        return r;
                }
            }
        }
    }
    return std::nullopt;
}

inline std::optional<SubgraphReport> find_double_cycle(const HashGraph& G,
                                                       std::uint64_t budget = 5'000'000) {
    for (auto& comp : graph_components(G))
        if (auto r = find_double_cycle_in(G, comp, budget)) return r;
    return std::nullopt;
}

}  // namespace tabhash
