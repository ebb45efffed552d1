#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ramsey/graph.hpp"

namespace ramsey {

// Every finder is budgeted: Absent means the search space was exhausted,
// Budget means the node cap tripped first and nothing can be concluded.
enum class SearchStatus { Found, Absent, Budget };

struct SearchLimits {
    std::uint64_t node_cap = 20'000'000;
};

template <typename W>
struct SearchResult {
    SearchStatus status = SearchStatus::Absent;
    std::optional<W> witness;
    std::uint64_t nodes = 0;
    bool found() const { return status == SearchStatus::Found; }
};

struct CycleWitness {
    std::vector<int> vertices; // cyclic order, consecutive adjacent, back edge closes
};

struct MultipartiteWitness {
    std::vector<std::vector<int>> parts; // aligned with the requested (ascending) sizes
};

namespace detail {

// Path DFS used by both cycle finders.  Cycles are canonicalised by their
// minimum vertex (the anchor): the DFS only ever walks vertices >= anchor.
struct CycleSearch {
    const Graph& g;
    int anchor;
    int target;          // exact order, or minimum order when at_least
    bool at_least;
    std::uint64_t cap;
    std::uint64_t& nodes;
    bool budget_hit = false;

    VSet allowed, used;
    std::vector<int> path;
    std::vector<int> dist; // distance to anchor within `allowed` (static lower bound)
    int avail;             // |allowed \ used|

    CycleSearch(const Graph& g_, int anchor_, int target_, bool at_least_, std::uint64_t cap_,
                std::uint64_t& nodes_)
        : g(g_), anchor(anchor_), target(target_), at_least(at_least_), cap(cap_), nodes(nodes_),
          allowed(g_.order()), used(g_.order()) {
        for (int v = anchor; v < g.order(); ++v) allowed.add(v);
        dist = bfs_distances(g, anchor, allowed);
        used.add(anchor);
        path = {anchor};
        avail = allowed.count() - 1;
    }

    bool extend(int v) {
        if (nodes >= cap) {
            budget_hit = true;
            return false;
        }
        ++nodes;
        int depth = int(path.size());
        if (!at_least && depth == target) return g.has_edge(v, anchor);
        if (at_least && depth >= target && g.has_edge(v, anchor)) return true;
        if (!at_least && depth + avail < target) return false;
        if (at_least && depth + avail < target) return false;
        VSet cand = (g.neighbors(v) & allowed) - used;
        for (int w = cand.first(); w >= 0; w = cand.next(w)) {
            if (dist[w] < 0) continue;
            if (!at_least && dist[w] > target - depth) continue; // can't get home in time
            used.add(w);
            path.push_back(w);
            --avail;
            if (extend(w)) return true;
            ++avail;
            path.pop_back();
            used.remove(w);
            if (budget_hit) return false;
        }
        return false;
    }
};

} // namespace detail

// Cycle of order exactly n (n >= 3).
inline SearchResult<CycleWitness> find_cycle_exact(const Graph& g, int n, SearchLimits lim = {}) {
    if (n < 3) throw std::invalid_argument("find_cycle_exact: n must be >= 3");
    SearchResult<CycleWitness> res;
    std::uint64_t nodes = 0;
    for (int a = 0; a + n <= g.order(); ++a) {
        detail::CycleSearch s(g, a, n, false, lim.node_cap, nodes);
        if (s.extend(a)) {
            res.status = SearchStatus::Found;
            res.witness = CycleWitness{s.path};
            res.nodes = nodes;
            return res;
        }
        if (s.budget_hit) {
            res.status = SearchStatus::Budget;
            res.nodes = nodes;
            return res;
        }
    }
    res.status = SearchStatus::Absent;
    res.nodes = nodes;
    return res;
}

// Cycle of order at least n.
inline SearchResult<CycleWitness> find_cycle_at_least(const Graph& g, int n, SearchLimits lim = {}) {
    if (n < 3) throw std::invalid_argument("find_cycle_at_least: n must be >= 3");
    SearchResult<CycleWitness> res;
    std::uint64_t nodes = 0;
    for (int a = 0; a + n <= g.order(); ++a) {
        detail::CycleSearch s(g, a, n, true, lim.node_cap, nodes);
        if (s.extend(a)) {
            res.status = SearchStatus::Found;
            res.witness = CycleWitness{s.path};
            res.nodes = nodes;
            return res;
        }
        if (s.budget_hit) {
            res.status = SearchStatus::Budget;
            res.nodes = nodes;
            return res;
        }
    }
    res.status = SearchStatus::Absent;
    res.nodes = nodes;
    return res;
}

// Exact girth (or -1 for forests): delete each edge, measure the detour.
// Independent of the DFS machinery above on purpose — it cross-checks it.
inline int girth(const Graph& g) {
    int best = -1;
    for (int u = 0; u < g.order(); ++u) {
        VSet nb = g.neighbors(u);
        for (int v = nb.next(u); v >= 0; v = nb.next(v)) {
            // shortest u-v path avoiding the edge uv itself
            std::vector<int> dist(g.order(), -1);
            dist[u] = 0;
            std::vector<int> q{u};
            for (std::size_t h = 0; h < q.size(); ++h) {
                int x = q[h];
                const VSet& xn = g.neighbors(x);
                for (int y = xn.first(); y >= 0; y = xn.next(y)) {
                    if (x == u && y == v) continue;
                    if (dist[y] < 0) {
                        dist[y] = dist[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            if (dist[v] >= 0 && (best < 0 || dist[v] + 1 < best)) best = dist[v] + 1;
        }
    }
    return best;
}

namespace detail {

struct MultipartiteSearch {
    const Graph& g;
    const std::vector<int>& sizes; // processing order (descending)
    std::uint64_t cap;
    std::uint64_t nodes = 0;
    bool budget_hit = false;
    std::vector<std::vector<int>> parts;
    VSet taken;

    MultipartiteSearch(const Graph& g_, const std::vector<int>& sizes_, std::uint64_t cap_)
        : g(g_), sizes(sizes_), cap(cap_), taken(g_.order()) {}

    // base: vertices adjacent to every member of all *earlier* parts
    bool fill(std::size_t pi, int got, int min_id, const VSet& base) {
        if (nodes >= cap) {
            budget_hit = true;
            return false;
        }
        ++nodes;
        if (got == sizes[pi]) {
            if (pi + 1 == sizes.size()) return true;
            VSet nbase = base;
            for (int v : parts[pi]) nbase &= g.neighbors(v);
            if ((nbase - taken).count() <
                std::accumulate(sizes.begin() + pi + 1, sizes.end(), 0))
                return false;
            parts.emplace_back();
            if (fill(pi + 1, 0, -1, nbase)) return true;
            parts.pop_back();
            return false;
        }
        VSet cand = base - taken;
        for (int v = cand.next(min_id); v >= 0; v = cand.next(v)) {
            parts[pi].push_back(v);
            taken.add(v);
            if (fill(pi, got + 1, v, base)) return true;
            taken.remove(v);
            parts[pi].pop_back();
            if (budget_hit) return false;
        }
        return false;
    }
};

} // namespace detail

// Complete multipartite subgraph with the given part sizes (ascending).
// Only cross-part edges are required — parts need not be independent.
inline SearchResult<MultipartiteWitness> find_complete_multipartite(const Graph& g,
                                                                    const std::vector<int>& sizes,
                                                                    SearchLimits lim = {}) {
    if (sizes.empty()) throw std::invalid_argument("find_complete_multipartite: no sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw std::invalid_argument("find_complete_multipartite: size < 1");
        if (i > 0 && sizes[i] < sizes[i - 1])
            throw std::invalid_argument("find_complete_multipartite: sizes must be ascending");
    }
    SearchResult<MultipartiteWitness> res;
    if (std::accumulate(sizes.begin(), sizes.end(), 0) > g.order()) {
        res.status = SearchStatus::Absent;
        return res;
    }
    // most-constrained (largest) part first; stable so equal sizes keep order
    std::vector<int> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sizes[a] > sizes[b]; });
    std::vector<int> proc_sizes(sizes.size());
    for (std::size_t i = 0; i < order.size(); ++i) proc_sizes[i] = sizes[order[i]];

    detail::MultipartiteSearch s(g, proc_sizes, lim.node_cap);
    s.parts.emplace_back();
    if (s.fill(0, 0, -1, VSet::full(g.order()))) {
        MultipartiteWitness w;
        w.parts.resize(sizes.size());
        for (std::size_t i = 0; i < order.size(); ++i) w.parts[order[i]] = s.parts[i];
        res.status = SearchStatus::Found;
        res.witness = std::move(w);
    } else {
        res.status = s.budget_hit ? SearchStatus::Budget : SearchStatus::Absent;
    }
    res.nodes = s.nodes;
    return res;
}

inline bool verify_multipartite(const Graph& g, const MultipartiteWitness& w,
                                const std::vector<int>& sizes) {
    if (w.parts.size() != sizes.size()) return false;
    VSet seen(g.order());
    for (std::size_t i = 0; i < w.parts.size(); ++i) {
        if (int(w.parts[i].size()) != sizes[i]) return false;
        for (int v : w.parts[i]) {
            if (v < 0 || v >= g.order() || seen.contains(v)) return false;
            seen.add(v);
        }
    }
    for (std::size_t i = 0; i < w.parts.size(); ++i)
        for (std::size_t j = i + 1; j < w.parts.size(); ++j)
            for (int u : w.parts[i])
                for (int v : w.parts[j])
                    if (!g.has_edge(u, v)) return false;
    return true;
}

// --- Menger: vertex-disjoint paths between sets, or a small separator ---

struct MengerResult {
    // Found  => `paths` holds `want` pairwise vertex-disjoint a-b paths
    // Absent => `separator` (< want vertices) disconnects a from b
    // Budget => node cap tripped, nothing concluded
    SearchStatus status = SearchStatus::Absent;
    std::vector<std::vector<int>> paths;
    std::vector<int> separator;
    std::uint64_t nodes = 0;
    bool found() const { return status == SearchStatus::Found; }
};

namespace detail {

// Unit-capacity max flow on the vertex-split digraph.  Vertex v becomes
// v_in = 2v -> v_out = 2v+1 (cap 1); undirected edges become a pair of
// high-capacity arcs so min cuts consist of vertex arcs only.
struct SplitFlow {
    struct Arc {
        int to, cap, flow = 0;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out; // arc indices per node

    void add(int from, int to, int cap) {
        out[from].push_back(int(arcs.size()));
        arcs.push_back({to, cap});
        out[to].push_back(int(arcs.size()));
        arcs.push_back({from, 0});
    }
    int residual(int i) const { return arcs[i].cap - arcs[i].flow; }
};

} // namespace detail

inline MengerResult vertex_disjoint_paths(const Graph& g, const VSet& a, const VSet& b, int want,
                                          SearchLimits lim = {}) {
    if (want < 1) throw std::invalid_argument("vertex_disjoint_paths: want < 1");
    if (a.empty() || b.empty()) throw std::invalid_argument("vertex_disjoint_paths: empty side");
    if (a.intersects(b)) throw std::invalid_argument("vertex_disjoint_paths: sides intersect");

    const int n = g.order();
    const int SRC = 2 * n, SNK = 2 * n + 1;
    const int BIG = want + 1;
    detail::SplitFlow fl;
    fl.out.resize(2 * n + 2);
    for (int v = 0; v < n; ++v) fl.add(2 * v, 2 * v + 1, 1);
    for (int u = 0; u < n; ++u) {
        VSet nb = g.neighbors(u);
        for (int v = nb.next(u); v >= 0; v = nb.next(v)) {
            fl.add(2 * u + 1, 2 * v, BIG);
            fl.add(2 * v + 1, 2 * u, BIG);
        }
    }
    for (int v = a.first(); v >= 0; v = a.next(v)) fl.add(SRC, 2 * v, 1);
    for (int v = b.first(); v >= 0; v = b.next(v)) fl.add(2 * v + 1, SNK, 1);

    MengerResult res;
    int flow = 0;
    std::vector<int> via(2 * n + 2);
    while (flow < want) {
        // BFS on the residual graph, lowest arc index first => deterministic
        std::fill(via.begin(), via.end(), -1);
        std::vector<int> q{SRC};
        via[SRC] = -2;
        bool reached = false;
        for (std::size_t h = 0; h < q.size() && !reached; ++h) {
            int u = q[h];
            for (int ai : fl.out[u]) {
                if (res.nodes++ >= lim.node_cap) {
                    res.status = SearchStatus::Budget;
                    return res;
                }
                if (fl.residual(ai) <= 0) continue;
                int v = fl.arcs[ai].to;
                if (via[v] != -1) continue;
                via[v] = ai;
                if (v == SNK) {
                    reached = true;
                    break;
                }
                q.push_back(v);
            }
        }
        if (!reached) break;
        for (int v = SNK; v != SRC;) {
            int ai = via[v];
            fl.arcs[ai].flow++;
            fl.arcs[ai ^ 1].flow--;
            v = fl.arcs[ai ^ 1].to;
        }
        ++flow;
    }

    if (flow >= want) {
        // cancel antiparallel edge flows, then peel unit paths with loop erasure
        for (int u = 0; u < n; ++u) {
            for (int ai : fl.out[2 * u + 1]) {
                if (ai & 1) continue;
                int v = fl.arcs[ai].to;
                if (v == SNK || (v & 1)) continue; // only u_out -> v_in arcs
                // find the reverse direction arc v_out -> u_in
                for (int aj : fl.out[v + 1]) {
                    if (aj & 1) continue;
                    if (fl.arcs[aj].to == 2 * u) {
                        int c = std::min(std::max(fl.arcs[ai].flow, 0), std::max(fl.arcs[aj].flow, 0));
                        fl.arcs[ai].flow -= c;
                        fl.arcs[aj].flow -= c;
                    }
                }
            }
        }
        for (int v = a.first(); v >= 0 && int(res.paths.size()) < want; v = a.next(v)) {
            // does v start a unit of flow?
            bool starts = false;
            for (int ai : fl.out[SRC])
                if (!(ai & 1) && fl.arcs[ai].to == 2 * v && fl.arcs[ai].flow > 0) {
                    fl.arcs[ai].flow--;
                    starts = true;
                }
            if (!starts) continue;
            std::vector<int> walk{v};
            std::vector<int> posof(n, -1);
            posof[v] = 0;
            int cur = v;
            while (true) {
                int nxt = -1;
                for (int ai : fl.out[2 * cur + 1]) {
                    if (ai & 1 || fl.arcs[ai].flow <= 0) continue;
                    int to = fl.arcs[ai].to;
                    fl.arcs[ai].flow--;
                    if (to == SNK) {
                        nxt = -2;
                    } else {
                        nxt = to / 2;
                    }
                    break;
                }
                assert(nxt != -1);
                if (nxt == -2) break;
                if (posof[nxt] >= 0) { // erase the loop we just closed
                    while (int(walk.size()) > posof[nxt] + 1) {
                        posof[walk.back()] = -1;
                        walk.pop_back();
                    }
                    cur = nxt;
                    continue;
                }
                posof[nxt] = int(walk.size());
                walk.push_back(nxt);
                cur = nxt;
            }
            // trim to last a-contact .. first b-contact
            int s = 0, t = int(walk.size()) - 1;
            for (int i = 0; i < int(walk.size()); ++i) {
                if (a.contains(walk[i])) s = i;
                if (b.contains(walk[i])) {
                    t = i;
                    break;
                }
            }
            res.paths.emplace_back(walk.begin() + s, walk.begin() + t + 1);
        }
        assert(int(res.paths.size()) == want);
        res.status = SearchStatus::Found;
        return res;
    }

    // min cut: vertices whose in->out arc crosses the residual-reachable frontier
    std::vector<char> reach(2 * n + 2, 0);
    reach[SRC] = 1;
    std::vector<int> q{SRC};
    for (std::size_t h = 0; h < q.size(); ++h) {
        int u = q[h];
        for (int ai : fl.out[u]) {
            if (fl.residual(ai) <= 0) continue;
            int v = fl.arcs[ai].to;
            if (!reach[v]) {
                reach[v] = 1;
                q.push_back(v);
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (reach[2 * v] && !reach[2 * v + 1]) res.separator.push_back(v);
    for (int v = a.first(); v >= 0; v = a.next(v))
        if (!reach[2 * v]) res.separator.push_back(v); // source arc saturated: cut at a itself
    std::sort(res.separator.begin(), res.separator.end());
    res.separator.erase(std::unique(res.separator.begin(), res.separator.end()),
                        res.separator.end());

    // the separator must verifiably disconnect a from b
    VSet keep = VSet::full(n);
    for (int v : res.separator) keep.remove(v);
    VSet frontier = a & keep;
    VSet seen = frontier;
    while (!frontier.empty()) {
        VSet nxt = (g.neighborhood(frontier) & keep) - seen;
        frontier = nxt;
        seen |= nxt;
    }
    if (seen.intersects(b) || int(res.separator.size()) >= want)
        throw std::logic_error("vertex_disjoint_paths: min cut failed re-verification");
    res.status = SearchStatus::Absent;
    return res;
}

// Internally vertex-disjoint a-b paths for a single non-adjacent pair: a and b
// are shared endpoints, interiors pairwise disjoint.  Absent => `separator`
// avoids a,b and disconnects them.  Common neighbours are forced through any
// separator, so they come first; the remainder reduces to set-disjoint paths
// between N(a) and N(b) in g - a - b - (common).
inline MengerResult internally_disjoint_paths(const Graph& g, int a, int b, int want,
                                              SearchLimits lim = {}) {
    if (want < 1) throw std::invalid_argument("internally_disjoint_paths: want < 1");
    if (a == b || g.has_edge(a, b))
        throw std::invalid_argument("internally_disjoint_paths: need a distinct non-adjacent pair");

    MengerResult res;
    VSet common = g.neighbors(a) & g.neighbors(b);
    for (int v = common.first(); v >= 0 && int(res.paths.size()) < want; v = common.next(v))
        res.paths.push_back({a, v, b});
    if (int(res.paths.size()) == want) {
        res.status = SearchStatus::Found;
        return res;
    }
    int rest = want - int(res.paths.size());
    VSet keep = g.vertices() - common;
    keep.remove(a);
    keep.remove(b);
    VSet na = g.neighbors(a) & keep, nb = g.neighbors(b) & keep;
    if (na.empty() || nb.empty()) {
        // every remaining a-b path runs through a common neighbour
        res.paths.clear();
        res.separator = common.to_vector();
        res.status = SearchStatus::Absent;
        return res;
    }
    auto [sub, map] = g.induced(keep);
    VSet sa(sub.order()), sb(sub.order());
    for (int i = 0; i < sub.order(); ++i) {
        if (na.contains(map[i])) sa.add(i);
        if (nb.contains(map[i])) sb.add(i);
    }
    auto inner = vertex_disjoint_paths(sub, sa, sb, rest, lim);
    res.nodes = inner.nodes;
    if (inner.status == SearchStatus::Budget) {
        res.paths.clear();
        res.status = SearchStatus::Budget;
        return res;
    }
    if (inner.found()) {
        for (const auto& p : inner.paths) {
            std::vector<int> full{a};
            for (int v : p) full.push_back(map[v]);
            full.push_back(b);
            res.paths.push_back(std::move(full));
        }
        res.status = SearchStatus::Found;
        return res;
    }
    res.paths.clear();
    res.separator = common.to_vector();
    for (int v : inner.separator) res.separator.push_back(map[v]);
    std::sort(res.separator.begin(), res.separator.end());
    res.status = SearchStatus::Absent;
    return res;
}

} // namespace ramsey
