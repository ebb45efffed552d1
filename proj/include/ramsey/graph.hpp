#pragma once

#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ramsey/bitset.hpp"

namespace ramsey {

// Simple undirected graph: order plus a symmetric, irreflexive adjacency
// relation held as one bitset row per vertex.  Treated as immutable once
// built; "deletion" is always done by taking induced subgraphs.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : n_(n), adj_(n, VSet(n)) {}

    static Graph complete(int n) {
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
        return g;
    }

    static Graph cycle(int n) {
        assert(n >= 3);
        Graph g(n);
        for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
        return g;
    }

    static Graph path(int n) {
        Graph g(n);
        for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
        return g;
    }

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& es) {
        Graph g(n);
        for (auto [u, v] : es) g.add_edge(u, v);
        return g;
    }

    int order() const { return n_; }

    void add_edge(int u, int v) {
        if (u == v) throw std::invalid_argument("graph: loop edge rejected");
        if (u < 0 || v < 0 || u >= n_ || v >= n_)
            throw std::invalid_argument("graph: edge endpoint out of range");
        adj_[u].add(v);
        adj_[v].add(u);
    }

    bool has_edge(int u, int v) const { return adj_[u].contains(v); }
    const VSet& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return adj_[v].count(); }

    long edge_count() const {
        long d = 0;
        for (int v = 0; v < n_; ++v) d += degree(v);
        return d / 2;
    }

    VSet vertices() const { return VSet::full(n_); }

    // N(s) = union of the members' neighbourhoods; may intersect s.
    VSet neighborhood(const VSet& s) const {
        VSet out(n_);
        for (int v = s.first(); v >= 0; v = s.next(v)) out |= adj_[v];
        return out;
    }

    // N(s) restricted to u.
    VSet neighborhood_in(const VSet& s, const VSet& u) const {
        VSet out = neighborhood(s);
        out &= u;
        return out;
    }

    // N(s) ∪ s
    VSet closed_neighborhood(const VSet& s) const {
        VSet out = neighborhood(s);
        out |= s;
        return out;
    }

    // Induced subgraph on `keep`, plus the relabeling map: map[new] = old.
    // Witnesses found in the subgraph lift back through the map.
    std::pair<Graph, std::vector<int>> induced(const VSet& keep) const {
        std::vector<int> map = keep.to_vector();
        std::vector<int> back(n_, -1);
        for (int i = 0; i < int(map.size()); ++i) back[map[i]] = i;
        Graph h(int(map.size()));
        for (int i = 0; i < int(map.size()); ++i) {
            VSet nb = adj_[map[i]] & keep;
            for (int v = nb.first(); v >= 0; v = nb.next(v))
                if (back[v] > i) h.add_edge(i, back[v]);
        }
        return {std::move(h), std::move(map)};
    }

    Graph complement() const {
        Graph g(n_);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (!has_edge(u, v)) g.add_edge(u, v);
        return g;
    }

    bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

private:
    int n_ = 0;
    std::vector<VSet> adj_;
};

// Red/blue 2-colouring of a complete graph: the red edges are stored as a
// graph, blue is everything else.
class TwoColoring {
public:
    TwoColoring() = default;
    explicit TwoColoring(Graph red) : red_(std::move(red)) {}

    int order() const { return red_.order(); }
    const Graph& red() const { return red_; }
    Graph blue() const { return red_.complement(); }

private:
    Graph red_;
};

// BFS distances from `src` inside the induced subgraph on `within`;
// unreachable (or excluded) vertices get -1.
inline std::vector<int> bfs_distances(const Graph& g, int src, const VSet& within) {
    std::vector<int> dist(g.order(), -1);
    if (!within.contains(src)) return dist;
    std::vector<int> q{src};
    dist[src] = 0;
    for (std::size_t head = 0; head < q.size(); ++head) {
        int u = q[head];
        VSet nb = g.neighbors(u) & within;
        for (int v = nb.first(); v >= 0; v = nb.next(v))
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

inline std::vector<int> bfs_distances(const Graph& g, int src) {
    return bfs_distances(g, src, VSet::full(g.order()));
}

// Shortest path src..dst inside `within` (inclusive endpoints), or empty if
// none.  Ties broken toward lower vertex ids, so results are deterministic.
inline std::vector<int> shortest_path(const Graph& g, int src, int dst, const VSet& within) {
    if (!within.contains(src) || !within.contains(dst)) return {};
    std::vector<int> dist = bfs_distances(g, src, within);
    if (dist[dst] < 0) return {};
    std::vector<int> path{dst};
    int cur = dst;
    while (cur != src) {
        VSet nb = g.neighbors(cur) & within;
        int pick = -1;
        for (int v = nb.first(); v >= 0; v = nb.next(v))
            if (dist[v] == dist[cur] - 1) {
                pick = v;
                break;
            }
        assert(pick >= 0);
        path.push_back(pick);
        cur = pick;
    }
    std::vector<int> rev(path.rbegin(), path.rend());
    return rev;
}

// Connected components as vertex sets, ordered by smallest member.
inline std::vector<VSet> components(const Graph& g, const VSet& within) {
    std::vector<VSet> out;
    VSet seen(g.order());
    for (int v = within.first(); v >= 0; v = within.next(v)) {
        if (seen.contains(v)) continue;
        VSet comp(g.order());
        std::vector<int> stack{v};
        comp.add(v);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            VSet nb = (g.neighbors(u) & within) - comp;
            for (int w = nb.first(); w >= 0; w = nb.next(w)) {
                comp.add(w);
                stack.push_back(w);
            }
        }
        seen |= comp;
        out.push_back(comp);
    }
    return out;
}

// 2-colour BFS check; returns false iff some component has an odd cycle.
inline bool is_bipartite(const Graph& g) {
    std::vector<int> side(g.order(), -1);
    for (int s = 0; s < g.order(); ++s) {
        if (side[s] >= 0) continue;
        side[s] = 0;
        std::vector<int> q{s};
        for (std::size_t head = 0; head < q.size(); ++head) {
            int u = q[head];
            const VSet& nb = g.neighbors(u);
            for (int v = nb.first(); v >= 0; v = nb.next(v)) {
                if (side[v] < 0) {
                    side[v] = side[u] ^ 1;
                    q.push_back(v);
                } else if (side[v] == side[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Validity helpers used all over the witness-checking code.

inline bool is_path_in(const Graph& g, const std::vector<int>& p) {
    if (p.empty()) return false;
    VSet seen(g.order());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || p[i] >= g.order() || seen.contains(p[i])) return false;
        seen.add(p[i]);
        if (i > 0 && !g.has_edge(p[i - 1], p[i])) return false;
    }
    return true;
}

inline bool is_cycle_in(const Graph& g, const std::vector<int>& c) {
    if (c.size() < 3) return false;
    if (!is_path_in(g, c)) return false;
    return g.has_edge(c.back(), c.front());
}

} // namespace ramsey
