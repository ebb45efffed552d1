#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ramsey/expansion.hpp"
#include "ramsey/graph.hpp"
#include "ramsey/search.hpp"

namespace ramsey {

// Rooted tree given by parent pointers: node 0 is the root, parent[i] < i.
struct RootedTreeSpec {
    std::vector<int> parent;

    int order() const { return int(parent.size()); }

    void validate() const {
        if (parent.empty() || parent[0] != -1)
            throw std::invalid_argument("tree spec: node 0 must be the root");
        for (int i = 1; i < order(); ++i)
            if (parent[i] < 0 || parent[i] >= i)
                throw std::invalid_argument("tree spec: parent[i] must precede i");
    }

    int root_degree() const {
        int d = 0;
        for (int i = 1; i < order(); ++i)
            if (parent[i] == 0) ++d;
        return d;
    }

    int max_degree() const {
        std::vector<int> deg(order(), 0);
        for (int i = 1; i < order(); ++i) {
            deg[i]++; // edge to parent
            deg[parent[i]]++;
        }
        return order() == 1 ? 0 : *std::max_element(deg.begin(), deg.end());
    }

    int depth() const {
        int best = 0;
        std::vector<int> d(order(), 0);
        for (int i = 1; i < order(); ++i) best = std::max(best, d[i] = d[parent[i]] + 1);
        return best;
    }

    static RootedTreeSpec single() { return {{-1}}; }

    static RootedTreeSpec path(int n) {
        RootedTreeSpec t;
        t.parent.resize(n);
        for (int i = 0; i < n; ++i) t.parent[i] = i - 1;
        return t;
    }

    static RootedTreeSpec star(int n) {
        RootedTreeSpec t;
        t.parent.assign(n, 0);
        t.parent[0] = -1;
        return t;
    }

    // heap-shaped binary tree: root has two children, depth floor(log2 n)
    static RootedTreeSpec binary(int n) {
        RootedTreeSpec t;
        t.parent.resize(n);
        t.parent[0] = -1;
        for (int i = 1; i < n; ++i) t.parent[i] = (i - 1) / 2;
        return t;
    }
};

struct EmbeddedForest {
    std::vector<std::vector<int>> images; // images[i][node], parallel to the request
    VSet used;                            // all image vertices, roots included
    ExpansionVerdict residual;            // expansion into w minus the images

    nlohmann::json to_json() const {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& im : images) trees.push_back(im);
        return {{"trees", trees}, {"residual", residual.to_json()}};
    }
};

// A-to-B path avoiding C, by layered frontier growth (equivalently BFS in g - C).
// p is the caller's claimed expansion into w; only the side conditions are checked
// here, the length bound is enforced on the output.
inline std::vector<int> connect_avoiding(const Graph& g, const VSet& w, const ExpansionParams& p,
                                         const VSet& a, const VSet& b, const VSet& c,
                                         int slack = 2) {
    if (a.empty() || b.empty()) throw std::invalid_argument("connect: empty endpoint set");
    if (a.intersects(b) || a.intersects(c) || b.intersects(c))
        throw std::invalid_argument("connect: A, B, C must be disjoint");
    long long cw = (c & w).count();
    if ((p.delta - 2) * static_cast<long long>(a.count()) < cw ||
        (p.delta - 2) * static_cast<long long>(b.count()) < cw)
        throw std::invalid_argument("connect: need (delta-2)|A|,(delta-2)|B| >= |C∩W|");
    if (p.beta * static_cast<long long>(p.m) < 2 * static_cast<long long>(c.count()))
        throw std::invalid_argument("connect: need beta*m >= 2|C|");

    int n = g.order();
    VSet allowed = g.vertices() - c;
    std::vector<int> via(n, -1);
    std::vector<int> q;
    for (int v = a.first(); v >= 0; v = a.next(v)) {
        via[v] = v;
        q.push_back(v);
    }
    int hit = -1;
    for (std::size_t h = 0; h < q.size() && hit < 0; ++h) {
        int u = q[h];
        if (b.contains(u)) {
            hit = u;
            break;
        }
        VSet nb = g.neighbors(u) & allowed;
        for (int v = nb.first(); v >= 0; v = nb.next(v))
            if (via[v] < 0) {
                via[v] = u;
                q.push_back(v);
                if (b.contains(v)) {
                    hit = v;
                    break;
                }
            }
    }
    if (hit < 0) throw std::runtime_error("connect: frontiers never meet");
    std::vector<int> path{hit};
    while (via[path.back()] != path.back()) path.push_back(via[path.back()]);
    std::reverse(path.begin(), path.end());

    double bound = 8.0 * std::log2(std::max(2, p.m)) +
                   2.0 * n / (double(p.beta) * p.m) + slack;
    if (double(path.size()) > bound)
        throw std::runtime_error("connect: path exceeds the length bound");
    if (path.size() > 1 && !is_path_in(g, path))
        throw std::logic_error("connect: assembled path failed re-verification");
    return path;
}

// Disjoint rooted trees greedily embedded leaf-by-leaf, roots fixed.  p is the
// claimed expansion of g into w; the contract degrades delta by a factor of 4,
// so trees may have degree up to p.delta/4 and the residual expansion into
// w minus the images is certified at (p.delta/4, beta, m).
inline EmbeddedForest embed_forest(const Graph& g, const VSet& w, const ExpansionParams& p,
                                   const std::vector<std::pair<int, RootedTreeSpec>>& roots,
                                   int exact_limit = 20, long long budget = 4000,
                                   std::uint64_t seed = 0) {
    long long dt = p.delta / 4;
    if (dt < 1) throw std::invalid_argument("embed: need delta >= 4");
    if (20 * dt > p.beta) throw std::invalid_argument("embed: need 20*(delta/4) <= beta");

    VSet outside = g.vertices() - w;
    VSet seen_roots(g.order());
    long long total = outside.count() - static_cast<long long>(roots.size()); // implicit singletons
    for (const auto& [r, spec] : roots) {
        spec.validate();
        if (r < 0 || r >= g.order() || !outside.contains(r))
            throw std::invalid_argument("embed: roots must be exactly the vertices outside w");
        if (seen_roots.contains(r)) throw std::invalid_argument("embed: duplicate root");
        seen_roots.add(r);
        if (spec.max_degree() > dt)
            throw std::invalid_argument("embed: tree degree above delta/4");
        total += spec.order();
    }
    if (total > (p.beta - 10 * dt) * static_cast<long long>(p.m))
        throw std::invalid_argument("embed: total tree order above (beta-10*(delta/4))*m");

    EmbeddedForest out;
    out.used = VSet(g.order());
    out.images.resize(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out.images[i].assign(roots[i].second.order(), -1);
        out.images[i][0] = roots[i].first;
        out.used.add(roots[i].first);
    }

    // all non-root nodes in placement order, parents first
    struct Job {
        int tree, node;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (int nd = 1; nd < roots[i].second.order(); ++nd) jobs.push_back({int(i), nd});

    struct Level {
        std::vector<int> cands;
        std::size_t pos = 0;
    };
    std::vector<Level> stack;
    stack.reserve(jobs.size());
    long long tries = 0, try_cap = std::max<long long>(10000, 50 * total);

    auto candidates = [&](const Job& j) {
        int par = out.images[j.tree][roots[j.tree].second.parent[j.node]];
        VSet free = (g.neighbors(par) & w) - out.used;
        VSet room = w - out.used;
        std::vector<std::pair<long long, int>> keyed;
        for (int x = free.first(); x >= 0; x = free.next(x))
            keyed.push_back({static_cast<long long>((g.neighbors(x) & room).count()), x});
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        std::vector<int> cs;
        cs.reserve(keyed.size());
        for (const auto& kv : keyed) cs.push_back(kv.second);
        return cs;
    };

    std::size_t level = 0;
    while (level < jobs.size()) {
        if (stack.size() == level) stack.push_back({candidates(jobs[level]), 0});
        Level& L = stack[level];
        bool placed = false;
        while (L.pos < L.cands.size()) {
            if (++tries > try_cap) throw std::runtime_error("embed: backtracking budget exhausted");
            int v = L.cands[L.pos++];
            if (out.used.contains(v)) continue;
            out.images[jobs[level].tree][jobs[level].node] = v;
            out.used.add(v);
            placed = true;
            break;
        }
        if (placed) {
            ++level;
            continue;
        }
        stack.pop_back();
        if (level == 0) throw std::runtime_error("embed: no placement for the first node");
        --level;
        int prev = out.images[jobs[level].tree][jobs[level].node];
        out.used.remove(prev);
        out.images[jobs[level].tree][jobs[level].node] = -1;
    }

    // re-verify the embedding before certifying anything
    VSet check(g.order());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto& spec = roots[i].second;
        for (int nd = 0; nd < spec.order(); ++nd) {
            int v = out.images[i][nd];
            if (v < 0 || check.contains(v))
                throw std::logic_error("embed: images overlap or are unset");
            check.add(v);
            if (nd > 0 && !g.has_edge(v, out.images[i][spec.parent[nd]]))
                throw std::logic_error("embed: tree edge not present in g");
        }
    }

    ExpansionParams res{dt, p.beta, p.m};
    out.residual = check_expands_into(
        g, w - out.used, res,
        CheckMode::automatic(g.order(), exact_limit, budget, seed));
    return out;
}

struct PathSystem {
    std::vector<std::vector<int>> paths;

    nlohmann::json to_json() const {
        nlohmann::json ps = nlohmann::json::array();
        for (const auto& p : paths) ps.push_back(p);
        return {{"paths", ps}};
    }
};

// Vertex-disjoint x_i - y_i paths of order <= l = 4|G|/(beta*m) + 10*log2(beta*m):
// embed a binary tree at every endpoint, then connect tree pairs one at a time,
// avoiding everything already used.  Tree orders are capped by the room actually
// available; every output path is re-verified against the l bound.
inline PathSystem connect_pairs(const Graph& g, const VSet& w, const ExpansionParams& p,
                                const std::vector<std::pair<int, int>>& pairs,
                                int exact_limit = 20, long long budget = 4000,
                                std::uint64_t seed = 0, int slack = 2) {
    if (p.delta < 16) throw std::invalid_argument("connect pairs: need delta >= 16");
    int n = g.order();
    long long t = static_cast<long long>(pairs.size());
    if (t < 1) throw std::invalid_argument("connect pairs: no pairs");
    long long bm = p.beta * static_cast<long long>(p.m);
    long long ell = static_cast<long long>(
        std::ceil(4.0 * n / double(bm) + 10.0 * std::log2(std::max<long long>(2, bm))));
    VSet outside = g.vertices() - w;
    VSet ends(n);
    for (auto [x, y] : pairs) {
        if (x == y || !outside.contains(x) || !outside.contains(y))
            throw std::invalid_argument("connect pairs: endpoints must be distinct and outside w");
        if (ends.contains(x) || ends.contains(y))
            throw std::invalid_argument("connect pairs: endpoints must not repeat");
        ends.add(x);
        ends.add(y);
    }
    if ((p.beta - 80) * static_cast<long long>(p.m) <
        4 * ell * t * t + static_cast<long long>(outside.count()))
        throw std::invalid_argument("connect pairs: need (beta-80)m >= 4*l*t^2 + |G \\ W|");

    // cap the per-tree order by the room w actually has, reserving space for
    // the connecting paths themselves
    long long qb = static_cast<long long>(
        std::ceil(8.0 * std::log2(std::max(2, p.m)) + 2.0 * n / double(bm))) + slack;
    long long room = static_cast<long long>(w.count()) - t * qb;
    long long per_tree = std::max<long long>(1, std::min(t * ell, 1 + room / (2 * t)));

    std::vector<std::pair<int, RootedTreeSpec>> roots;
    for (auto [x, y] : pairs) {
        roots.push_back({x, RootedTreeSpec::binary(int(per_tree))});
        roots.push_back({y, RootedTreeSpec::binary(int(per_tree))});
    }
    EmbeddedForest forest;
    try {
        forest = embed_forest(g, w, p, roots, exact_limit, budget, seed);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("connect pairs (tree stage): ") + e.what());
    }
    VSet wp = w - forest.used;
    ExpansionParams inner{p.delta / 4, p.beta, p.m};

    auto tree_path_to_root = [&](std::size_t tree, int v) {
        // image vertex v back up to the root, as a vertex list ending at the root
        const auto& spec = roots[tree].second;
        int node = -1;
        for (int nd = 0; nd < spec.order(); ++nd)
            if (forest.images[tree][nd] == v) node = nd;
        if (node < 0) throw std::logic_error("connect pairs: path endpoint not a tree image");
        std::vector<int> up;
        for (; node >= 0; node = spec.parent[node]) up.push_back(forest.images[tree][node]);
        return up;
    };

    PathSystem out;
    std::vector<VSet> tree_sets;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        VSet s(n);
        for (int v : forest.images[i]) s.add(v);
        tree_sets.push_back(s);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        VSet avoid(n);
        for (const auto& q : out.paths)
            for (int v : q) avoid.add(v);
        for (std::size_t j = 0; j < pairs.size(); ++j)
            if (j != i) avoid |= tree_sets[2 * j] | tree_sets[2 * j + 1];
        std::vector<int> q;
        try {
            q = connect_avoiding(g, wp, inner, tree_sets[2 * i], tree_sets[2 * i + 1],
                                 avoid - (tree_sets[2 * i] | tree_sets[2 * i + 1]), slack);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("connect pairs (join stage): ") + e.what());
        }
        auto up_a = tree_path_to_root(2 * i, q.front());     // q.front() .. x_i
        auto up_b = tree_path_to_root(2 * i + 1, q.back()); // q.back() .. y_i
        std::vector<int> path(up_a.rbegin(), up_a.rend());  // x_i .. q.front()
        path.insert(path.end(), q.begin() + 1, q.end());
        path.insert(path.end(), up_b.begin() + 1, up_b.end());
        if (!is_path_in(g, path) || path.front() != pairs[i].first ||
            path.back() != pairs[i].second)
            throw std::logic_error("connect pairs: assembled path failed re-verification");
        if (static_cast<long long>(path.size()) > ell + slack)
            throw std::runtime_error("connect pairs: path exceeds the l bound");
        out.paths.push_back(std::move(path));
    }
    VSet used(n);
    for (const auto& q : out.paths)
        for (int v : q) {
            if (used.contains(v)) throw std::logic_error("connect pairs: paths overlap");
            used.add(v);
        }
    return out;
}

// Exact shortest odd cycle via breadth-first search on the parity double cover.
// The output is re-verified to be geodesic (cycle distances realise graph
// distances) and to meet every neighborhood in at most 5 vertices — both are
// forced for a shortest odd cycle, so a violation means a bug.
inline CycleWitness shortest_odd_cycle(const Graph& g) {
    if (is_bipartite(g)) throw std::invalid_argument("shortest odd cycle: graph is bipartite");
    int n = g.order();
    int best = 2 * n + 1, best_v = -1;
    std::vector<int> dist(2 * n), par(2 * n);
    auto run = [&](int src, int cap) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(par.begin(), par.end(), -1);
        std::vector<int> q{2 * src};
        dist[2 * src] = 0;
        for (std::size_t h = 0; h < q.size(); ++h) {
            int cur = q[h];
            if (dist[cur] >= cap) break; // deeper layers cannot beat cap
            int v = cur / 2, pa = cur % 2;
            VSet nb = g.neighbors(v);
            for (int u = nb.first(); u >= 0; u = nb.next(u)) {
                int nxt = 2 * u + (1 - pa);
                if (dist[nxt] < 0) {
                    dist[nxt] = dist[cur] + 1;
                    par[nxt] = cur;
                    q.push_back(nxt);
                }
            }
        }
        return dist[2 * src + 1];
    };
    for (int v = 0; v < n && best > 3; ++v) {
        int d = run(v, best - 1);
        if (d > 0 && d < best) {
            best = d;
            best_v = v;
        }
    }
    if (best_v < 0) throw std::logic_error("shortest odd cycle: no odd closed walk found");
    run(best_v, best);
    std::vector<int> walk;
    for (int cur = 2 * best_v + 1; cur >= 0; cur = par[cur]) walk.push_back(cur / 2);
    walk.pop_back(); // both ends are best_v; drop one copy
    std::reverse(walk.begin(), walk.end());

    if (int(walk.size()) != best || walk.size() % 2 == 0 || !is_cycle_in(g, walk))
        throw std::logic_error("shortest odd cycle: extracted walk is not a minimal odd cycle");

    // geodesic property and the <=5 neighborhood bound
    int L = int(walk.size());
    for (int i = 0; i < L; ++i) {
        auto d = bfs_distances(g, walk[i]);
        for (int j = 0; j < L; ++j) {
            int dc = std::min(std::abs(i - j), L - std::abs(i - j));
            if (d[walk[j]] != dc)
                throw std::logic_error("shortest odd cycle: output is not geodesic");
        }
    }
    VSet cs = VSet::of(n, walk);
    for (int v = 0; v < n; ++v)
        if ((g.neighbors(v) & cs).count() > 5)
            throw std::logic_error("shortest odd cycle: a vertex has >5 neighbors on the cycle");

    CycleWitness cw;
    cw.vertices = walk;
    return cw;
}

struct PreservedPath {
    std::vector<int> path;
    ExpansionVerdict residual;

    nlohmann::json to_json() const {
        return {{"path", path}, {"residual", residual.to_json()}};
    }
};

// Shortest x-y path; expansion into w minus the path survives with delta
// degraded by 5 (shortest paths meet each neighborhood in <= 5 vertices).
inline PreservedPath short_path_expansion_preserving(const Graph& g, const VSet& w,
                                                     const ExpansionParams& p, int x, int y,
                                                     int exact_limit = 20, long long budget = 4000,
                                                     std::uint64_t seed = 0, int slack = 2) {
    auto path = shortest_path(g, x, y, g.vertices());
    if (path.empty()) throw std::runtime_error("short path: no x-y path");
    double bound = 16.0 * std::log2(std::max(2, p.m)) +
                   4.0 * g.order() / (double(p.beta) * p.m) + slack;
    if (double(path.size()) > bound)
        throw std::runtime_error("short path: shortest path exceeds the bound");
    PreservedPath out;
    out.path = path;
    ExpansionParams res{p.delta - 5, p.beta, p.m};
    out.residual = check_expands_into(
        g, w - VSet::of(g.order(), path), res,
        CheckMode::automatic(g.order(), exact_limit, budget, seed));
    return out;
}

struct LongOddCycle {
    CycleWitness cycle;
    VSet kept;                 // vertex set of the residual induced subgraph
    std::vector<int> reserved; // the r consecutive cycle vertices outside `kept`
    ExpansionVerdict residual;
    std::string construction; // which case produced the cycle

    nlohmann::json to_json() const {
        return {{"cycle", cycle.vertices},
                {"reserved", reserved},
                {"kept", kept.to_vector()},
                {"construction", construction},
                {"residual", residual.to_json()}};
    }
};

namespace detail {

// Remove r consecutive cycle vertices and certify what is left; windows are
// tried in deterministic order and the first non-falsified certificate wins.
// If none certifies, the first window is returned with its honest verdict.
inline LongOddCycle reserve_window(const Graph& g, const ExpansionParams& p,
                                   const std::vector<int>& cyc, int r, const std::string& tag,
                                   int exact_limit, long long budget, std::uint64_t seed) {
    int L = int(cyc.size());
    VSet cset = VSet::of(g.order(), cyc);
    // delta/4-7 can drop below zero, where clause (i) is vacuous; claim 0 instead
    ExpansionParams res{std::max<long long>(0, p.delta / 4 - 7), p.beta - 3, p.m};
    // when the residual is too small for clause (ii) to hold at all, every
    // window falsifies the same way; scanning them would change nothing
    long long sub_n = static_cast<long long>(g.order()) - r;
    int tries = (2 * res.m <= sub_n && sub_n < res.m + res.beta * res.m) ? 1 : L;
    LongOddCycle first;
    bool have_first = false;
    for (int off = 0; off < tries; ++off) {
        std::vector<int> window;
        for (int i = 0; i < r; ++i) window.push_back(cyc[(off + i) % L]);
        VSet kept = g.vertices() - VSet::of(g.order(), window);
        auto [sub, map] = g.induced(kept);
        VSet target(sub.order());
        for (int i = 0; i < sub.order(); ++i)
            if (!cset.contains(map[i])) target.add(i);
        auto verdict = check_expands_into(
            sub, target, res, CheckMode::automatic(sub.order(), exact_limit, budget, seed));
        LongOddCycle cand;
        cand.cycle.vertices = cyc;
        cand.kept = kept;
        cand.reserved = window;
        cand.residual = verdict;
        cand.construction = tag;
        if (!verdict.falsified()) return cand;
        if (!have_first) {
            first = cand;
            have_first = true;
        }
    }
    return first;
}

} // namespace detail

// Odd cycle of order in [r+2, r + 16*log2(m) + 5|G|/(beta*m)] whose removal of
// r consecutive vertices leaves a certified residual expander.  Follows three
// cases: the shortest odd cycle is already long enough; extend it by a pendant
// path closed with an edge; or close through a connecting path, choosing the
// cycle arc whose parity makes the total odd.
inline LongOddCycle long_odd_cycle(const Graph& g, const ExpansionParams& p, int r,
                                   int exact_limit = 20, long long budget = 4000,
                                   std::uint64_t seed = 0, int slack = 2) {
    if (r < 1 || r % 2 == 0) throw std::invalid_argument("long odd cycle: r must be odd");
    if (r > p.m) throw std::invalid_argument("long odd cycle: need r <= m");
    if (p.delta < 20 || p.beta < 8 * p.delta)
        throw std::invalid_argument("long odd cycle: need delta >= 20 and beta >= 8*delta");

    int n = g.order();
    double lg = std::log2(std::max(2, p.m));
    double short_bound = 16.0 * lg + 4.0 * n / (double(p.beta) * p.m) + slack;
    double full_bound = r + 16.0 * lg + 5.0 * n / (double(p.beta) * p.m) + slack;

    auto codd = shortest_odd_cycle(g).vertices;
    if (double(codd.size()) > short_bound)
        throw std::runtime_error("long odd cycle (short cycle stage): cycle exceeds the bound");

    if (int(codd.size()) >= r + 2)
        return detail::reserve_window(g, p, codd, r, "short-cycle-long-enough", exact_limit,
                                      budget, seed);

    int L = int(codd.size()), q = L / 2;
    int x = codd[0], y = codd[q];
    std::vector<int> arc_short(codd.begin(), codd.begin() + q + 1); // x..y, order q+1
    std::vector<int> arc_long{x};                                   // x..y the other way, q+2
    for (int i = L - 1; i >= q; --i) arc_long.push_back(codd[i]);

    VSet codd_set = VSet::of(n, codd);
    std::vector<std::pair<int, RootedTreeSpec>> roots{
        {x, RootedTreeSpec::path(r - q + 2)}};
    ExpansionParams after_cycle{p.delta - 5, p.beta, p.m};
    EmbeddedForest forest;
    try {
        forest = embed_forest(g, g.vertices() - codd_set, after_cycle, roots, exact_limit,
                              budget, seed);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("long odd cycle (pendant path stage): ") + e.what());
    }
    const std::vector<int>& pend = forest.images[0]; // x .. z
    int z = pend.back();

    auto close_cycle = [&](const std::vector<int>& arc, const std::vector<int>& back) {
        // arc runs x..y, back runs y..z..x exclusive of its first and last entries
        std::vector<int> cyc = arc;
        cyc.insert(cyc.end(), back.begin() + 1, back.end() - 1);
        return cyc;
    };

    if (g.has_edge(z, y)) {
        // y -> z -> pendant path back to x
        std::vector<int> back{y, z};
        for (int i = int(pend.size()) - 2; i >= 0; --i) back.push_back(pend[i]);
        auto cyc = close_cycle(arc_short, back);
        if (!is_cycle_in(g, cyc) || cyc.size() % 2 == 0 || int(cyc.size()) != r + 2)
            throw std::logic_error("long odd cycle: edge-closed cycle failed re-verification");
        return detail::reserve_window(g, p, cyc, r, "arc-closed-by-edge", exact_limit, budget,
                                      seed);
    }

    // connect z back to y through the untouched part of the graph
    VSet pend_set = VSet::of(n, pend);
    VSet g1v = (g.vertices() - codd_set - pend_set);
    g1v.add(z);
    g1v.add(y);
    auto [g1, map1] = g.induced(g1v);
    int zi = -1, yi = -1;
    for (int i = 0; i < g1.order(); ++i) {
        if (map1[i] == z) zi = i;
        if (map1[i] == y) yi = i;
    }
    auto qpath = shortest_path(g1, zi, yi, g1.vertices());
    if (qpath.empty())
        throw std::runtime_error("long odd cycle (connecting path stage): z and y disconnected");
    double q_bound = 16.0 * lg + 4.0 * n / (double(p.beta - 2) * p.m) + slack;
    if (double(qpath.size()) > q_bound)
        throw std::runtime_error("long odd cycle (connecting path stage): path exceeds bound");
    std::vector<int> qmap;
    for (int v : qpath) qmap.push_back(map1[v]); // z .. y

    // pick the arc making the total order odd
    for (const auto* arc : {&arc_short, &arc_long}) {
        std::size_t total = arc->size() + pend.size() + qmap.size() - 3;
        if (total % 2 == 0) continue;
        std::vector<int> back(qmap.rbegin(), qmap.rend()); // y .. z
        for (int i = int(pend.size()) - 2; i >= 0; --i) back.push_back(pend[i]);
        auto cyc = close_cycle(*arc, back);
        if (!is_cycle_in(g, cyc) || cyc.size() % 2 == 0)
            throw std::logic_error("long odd cycle: path-closed cycle failed re-verification");
        if (int(cyc.size()) < r + 2 || double(cyc.size()) > full_bound)
            throw std::runtime_error("long odd cycle: assembled cycle misses the bracket");
        return detail::reserve_window(g, p, cyc, r, "arc-closed-by-path", exact_limit, budget,
                                      seed);
    }
    throw std::logic_error("long odd cycle: neither arc parity closes an odd cycle");
}

} // namespace ramsey
