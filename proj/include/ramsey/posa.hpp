#pragma once
// Rotation-extension machinery.  A rotation pins the first vertex of a path,
// picks a pivot adjacent to the last vertex, and reverses the tail beyond the
// pivot; iterating rotations from a fixed path yields its ending-vertex set S,
// which in a graph where the path cannot be extended satisfies |N(S)| <= 3|S|.
// On top of the closure sit a longest-path search and the exact-length
// connection routine that threads a gadget into a long path and trades its
// witness ladder for the final length adjustment.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ramsey/gadget.hpp"

namespace ramsey {

// ---------------------------------------------------------------------------
// Rotation closure

struct RotationState {
    std::vector<int> base_path;
    // One derived path per ending vertex, in discovery order; entry 0 is the
    // base path itself.  All entries share the base path's first vertex and
    // vertex set.
    std::vector<std::vector<int>> derived_frontier;
    VSet ending_vertices;

    const std::vector<int>& path_ending_at(int v) const {
        for (const auto& q : derived_frontier)
            if (q.back() == v) return q;
        throw std::invalid_argument("rotation state: no derived path ends at " +
                                    std::to_string(v));
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"base_path", base_path},
                              {"derived_frontier", derived_frontier},
                              {"ending_vertices", ending_vertices.to_vector()}};
    }
};

namespace detail {

// p with the tail beyond position j reversed: p0..pj p_last..p_{j+1}.
inline std::vector<int> rotate_at(const std::vector<int>& p, int j) {
    std::vector<int> q(p.begin(), p.begin() + j + 1);
    q.insert(q.end(), p.rbegin(), p.rend() - (j + 1));
    return q;
}

} // namespace detail

// BFS over rotations, keeping one stored path per newly met ending vertex.
// Keeping a single representative is deliberate: the full derivation tree can
// reach further ending vertices, but every vertex reported here carries a
// genuine derived path, and the 3|S| neighbourhood bound below survives the
// restriction (the disturbed-vertex induction only ever walks stored paths).
inline RotationState ending_vertices(const Graph& g, const std::vector<int>& p,
                                     const ConstantsProfile& prof = ConstantsProfile::desk()) {
    if (!is_path_in(g, p)) throw std::invalid_argument("ending vertices: not a path in g");
    const int t = static_cast<int>(p.size());
    RotationState st;
    st.base_path = p;
    st.ending_vertices = VSet(g.order());
    st.ending_vertices.add(p.back());
    st.derived_frontier.push_back(p);
    std::vector<int> pos(g.order(), -1);
    for (std::size_t head = 0; head < st.derived_frontier.size(); ++head) {
        std::vector<int> cur = st.derived_frontier[head]; // copy: the vector may grow
        for (int i = 0; i < t; ++i) pos[cur[i]] = i;
        VSet nb = g.neighbors(cur.back());
        for (int u = nb.first(); u >= 0; u = nb.next(u)) {
            int j = pos[u];
            // pivot must lie on the path, at least two spots before the end
            if (j < 0 || j > t - 3) continue;
            int e = cur[j + 1];
            if (st.ending_vertices.contains(e)) continue;
            if (static_cast<long long>(st.derived_frontier.size()) >= prof.rotation_frontier)
                throw std::runtime_error("ending vertices: rotation frontier budget exhausted");
            st.ending_vertices.add(e);
            st.derived_frontier.push_back(detail::rotate_at(cur, j));
        }
        for (int i = 0; i < t; ++i) pos[cur[i]] = -1;
    }
    return st;
}

// ---------------------------------------------------------------------------
// The neighbourhood bound

struct PosaVerdict {
    bool holds = false;
    VSet ending;       // S
    VSet neighborhood; // N(S), members of S included when adjacent to S

    nlohmann::json to_json() const {
        return nlohmann::json{{"holds", holds},
                              {"ending", ending.to_vector()},
                              {"neighborhood", neighborhood.to_vector()}};
    }
};

// Reports whether |N(S)| <= 3|S| for the rotation ending set of p.  The bound
// is a theorem when p is a maximum-order path from its first vertex; for
// shorter paths the verdict simply records what was found.
inline PosaVerdict check_posa_bound(const Graph& g, const std::vector<int>& p,
                                    const ConstantsProfile& prof = ConstantsProfile::desk()) {
    RotationState st = ending_vertices(g, p, prof);
    PosaVerdict v;
    v.ending = st.ending_vertices;
    v.neighborhood = g.neighborhood(st.ending_vertices);
    v.holds = static_cast<long long>(v.neighborhood.count()) <=
              3LL * static_cast<long long>(v.ending.count());
    return v;
}

// ---------------------------------------------------------------------------
// Longest path by rotation-extension

// Grows a path from v (inside `within` when given) by greedy extension,
// breaking deadlocks with rotations, until no derived path's endpoint has a
// neighbour off the path.  Lowest-id choices throughout, so deterministic.
inline std::vector<int> longest_path_from(const Graph& g, int v,
                                          std::optional<VSet> within = std::nullopt,
                                          const ConstantsProfile& prof =
                                              ConstantsProfile::desk()) {
    if (v < 0 || v >= g.order()) throw std::invalid_argument("longest path: v out of range");
    VSet win = within ? *within : g.vertices();
    if (!win.contains(v)) throw std::invalid_argument("longest path: v outside the allowed set");
    std::vector<int> path{v};
    VSet used(g.order());
    used.add(v);
    for (;;) {
        for (;;) {
            VSet cand = (g.neighbors(path.back()) & win) - used;
            int w = cand.first();
            if (w < 0) break;
            path.push_back(w);
            used.add(w);
        }
        RotationState st = ending_vertices(g, path, prof);
        bool extended = false;
        for (const auto& q : st.derived_frontier) {
            VSet cand = (g.neighbors(q.back()) & win) - used;
            int w = cand.first();
            if (w < 0) continue;
            path = q;
            path.push_back(w);
            used.add(w);
            extended = true;
            break;
        }
        if (!extended) return path;
    }
}

// Exact maximum-order path from v by dynamic programming over vertex subsets.
// Certification oracle for the rotation-extension search; order capped at 14.
inline std::vector<int> exhaustive_longest_path_from(const Graph& g, int v) {
    const int n = g.order();
    if (n < 1 || n > 14)
        throw std::invalid_argument("exhaustive longest path: order must be in [1,14]");
    if (v < 0 || v >= n) throw std::invalid_argument("exhaustive longest path: v out of range");
    std::vector<std::uint32_t> adj(n, 0);
    for (int u = 0; u < n; ++u) {
        VSet nb = g.neighbors(u);
        for (int w = nb.first(); w >= 0; w = nb.next(w)) adj[u] |= std::uint32_t(1) << w;
    }
    const std::uint32_t full = std::uint32_t(1) << n;
    // ends[mask] = endpoints of simple paths from v covering exactly mask
    std::vector<std::uint16_t> ends(full, 0);
    ends[std::uint32_t(1) << v] = static_cast<std::uint16_t>(std::uint32_t(1) << v);
    std::uint32_t best_mask = std::uint32_t(1) << v;
    int best_order = 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        std::uint16_t e = ends[mask];
        if (!e) continue;
        int order = __builtin_popcount(mask);
        if (order > best_order) {
            best_order = order;
            best_mask = mask;
        }
        for (int u = 0; u < n; ++u) {
            if (!(e >> u & 1)) continue;
            std::uint32_t ext = adj[u] & ~mask;
            while (ext) {
                int w = __builtin_ctz(ext);
                ext &= ext - 1;
                ends[mask | (std::uint32_t(1) << w)] |=
                    static_cast<std::uint16_t>(std::uint32_t(1) << w);
            }
        }
    }
    // walk the winning mask back to v, lowest eligible predecessor first
    std::vector<int> path;
    std::uint32_t mask = best_mask;
    int e = __builtin_ctz(ends[best_mask]);
    while (true) {
        path.push_back(e);
        mask &= ~(std::uint32_t(1) << e);
        if (!mask) break;
        std::uint32_t preds = adj[e] & mask;
        int pick = -1;
        while (preds) {
            int w = __builtin_ctz(preds);
            preds &= preds - 1;
            if (ends[mask] >> w & 1) {
                pick = w;
                break;
            }
        }
        if (pick < 0) throw std::logic_error("exhaustive longest path: broken back-walk");
        e = pick;
    }
    std::reverse(path.begin(), path.end());
    if (path.front() != v || static_cast<int>(path.size()) != best_order)
        throw std::logic_error("exhaustive longest path: reconstruction mismatch");
    return path;
}

// ---------------------------------------------------------------------------
// Exact-length connection

// Two disjoint vertex sets with no edges of g between them: the complement
// holds a complete bipartite graph on them, refuting a freeness hypothesis.
struct ComplementBiclique {
    std::vector<int> left, right;

    nlohmann::json to_json() const {
        return nlohmann::json{{"left", left}, {"right", right}};
    }
};

struct ConnectResult {
    std::optional<std::vector<int>> path;      // order exactly n, runs x .. y
    std::optional<ComplementBiclique> counter; // freeness refuted mid-run
    std::vector<std::string> trace;

    bool found() const { return path.has_value(); }

    nlohmann::json to_json() const {
        nlohmann::json j{{"trace", trace}};
        j["path"] = path ? nlohmann::json(*path) : nlohmann::json();
        j["counter"] = counter ? counter->to_json() : nlohmann::json();
        return j;
    }
};

namespace detail {

// First m of each pool, checked edge-free across; callers only harvest after
// an exhaustive scan came up empty, so a crossing edge is a bug.
inline ComplementBiclique biclique_from(const Graph& g, const std::vector<int>& pool_a,
                                        const std::vector<int>& pool_b, int m) {
    if (static_cast<int>(pool_a.size()) < m || static_cast<int>(pool_b.size()) < m)
        throw std::logic_error("biclique harvest: pool smaller than m");
    ComplementBiclique w;
    w.left.assign(pool_a.begin(), pool_a.begin() + m);
    w.right.assign(pool_b.begin(), pool_b.begin() + m);
    for (int u : w.left)
        for (int v : w.right)
            if (u == v || g.has_edge(u, v))
                throw std::logic_error("biclique harvest: crossing edge survived the scan");
    return w;
}

// One sweep of chord excisions over seg: wherever seg[i] and seg[i+d] are
// adjacent with 2 <= d <= 2m+1, the d-1 interior vertices may be cut out.
// Takes the largest eligible d at each anchor, never spending more than
// `budget` vertices overall.  Returns the number of vertices removed.
inline int chord_sweep(const Graph& g, std::vector<int>& seg, int m, long long& budget) {
    int removed = 0;
    std::size_t i = 0;
    while (i + 2 < seg.size() && budget > 0) {
        long long dmax = std::min<long long>({2LL * m + 1, budget + 1,
                                              static_cast<long long>(seg.size() - 1 - i)});
        int hit = -1;
        for (long long d = dmax; d >= 2; --d)
            if (g.has_edge(seg[i], seg[i + d])) {
                hit = static_cast<int>(d);
                break;
            }
        if (hit < 0) {
            ++i;
            continue;
        }
        seg.erase(seg.begin() + static_cast<long>(i) + 1, seg.begin() + static_cast<long>(i) + hit);
        removed += hit - 1;
        budget -= hit - 1;
    }
    return removed;
}

// The first 2m+2 consecutive vertices of a chord-free stretch split into two
// m-blocks (separated by two vertices) with no edges across.
inline ComplementBiclique biclique_from_chordless(const Graph& g, const std::vector<int>& seg,
                                                  int m) {
    if (static_cast<int>(seg.size()) < 2 * m + 2)
        throw std::logic_error("biclique harvest: stretch shorter than 2m+2");
    std::vector<int> left(seg.begin(), seg.begin() + m);
    std::vector<int> right(seg.begin() + m + 2, seg.begin() + 2 * m + 2);
    return biclique_from(g, left, right, m);
}

} // namespace detail

// Grows a path of order exactly n from x to y out of the seed path p, which
// must itself run from x to y with |p| >= 8m.  The caller claims that the
// complement of g holds no complete bipartite graph with parts of size m and
// that every vertex set of size >= m sees at least n vertices including
// itself; the run verifies every consequence it uses, throws a stage-tagged
// error when one fails, and returns a complement biclique as a counter-witness
// whenever a freeness consequence is refuted outright.
inline ConnectResult connect_exact_length(const Graph& g, int x, int y, const std::vector<int>& p,
                                          int m, long long n,
                                          const ConstantsProfile& prof = ConstantsProfile::desk(),
                                          std::uint64_t seed = 0) {
    ConnectResult out;
    auto note = [&](std::string s) { out.trace.push_back(std::move(s)); };
    auto fail = [](const std::string& stage, const std::string& msg) {
        throw std::runtime_error("connect (" + stage + "): " + msg);
    };

    // seed path and scale validation
    if (m < 2) throw std::invalid_argument("connect: need m >= 2");
    if (!is_path_in(g, p)) throw std::invalid_argument("connect: seed is not a path in g");
    if (p.front() != x || p.back() != y)
        throw std::invalid_argument("connect: seed path must run from x to y");
    if (static_cast<long long>(p.size()) < 8LL * m)
        throw std::invalid_argument("connect: seed path shorter than 8m");
    if (static_cast<double>(n) < prof.N2 * static_cast<double>(m))
        throw std::invalid_argument("connect: n below the profile threshold N2*m");
    if (static_cast<double>(g.order()) <
        prof.N1 * prof.lambda * prof.mu * 2.0 * static_cast<double>(m))
        throw std::invalid_argument("connect: host below the profile threshold");
    // the host check bounds lambda*mu, so the casts below cannot overflow
    const long long lam = ceil_ll(prof.lambda);
    const long long mu = ceil_ll(prof.mu);
    if (mu < 2) throw std::invalid_argument("connect: need mu >= 2");
    if (n <= (mu + 4) * m || n <= 42LL * m)
        throw std::invalid_argument("connect: n below the gadget and expander scales");
    const long long shortfall = lam * m;

    // trim the seed to at most 10m vertices, chords shedding at most 2m each
    std::vector<int> trimmed = p;
    {
        long long budget = static_cast<long long>(trimmed.size()) - 8LL * m;
        for (int pass = 0; pass < prof.chord_passes; ++pass) {
            if (static_cast<long long>(trimmed.size()) <= 10LL * m) break;
            if (detail::chord_sweep(g, trimmed, m, budget) == 0) break;
        }
        if (static_cast<long long>(trimmed.size()) > 10LL * m) {
            out.counter = detail::biclique_from_chordless(g, trimmed, m);
            note("trim stalled at order " + std::to_string(trimmed.size()) +
                 ": complement biclique harvested");
            return out;
        }
        note("seed trimmed to order " + std::to_string(trimmed.size()));
    }
    const VSet pset = VSet::of(g.order(), trimmed);

    // gadget with return path, built away from the trimmed seed
    Gadget jg;
    std::vector<int> ret;
    {
        auto [sub, map] = g.induced(g.vertices() - pset);
        GadgetWithReturn jr;
        try {
            jr = build_gadget_with_return(sub, m, 2, lam, mu, prof,
                                          detail::mix_seed(seed, 301));
        } catch (const std::exception& e) {
            fail("gadget", e.what());
        }
        jg = detail::remap_gadget(jr.gadget, map, g.order());
        ret = detail::remap_path(jr.return_path, map);
        try {
            assert_gadget(g, jg);
        } catch (const std::exception& e) {
            throw std::logic_error(std::string("connect (gadget): remap broke the gadget: ") +
                                   e.what());
        }
        if (!is_path_in(g, ret) || ret.front() != jg.a || ret.back() != jg.b)
            throw std::logic_error("connect (gadget): remap broke the return path");
        note("gadget of order " + std::to_string(jg.order()) + " with return path of order " +
             std::to_string(ret.size()));
    }

    // reroute: two disjoint edges between the middles of the return path and
    // the seed split both into an x-leg and a y-leg ending at the gadget
    std::vector<int> seg_x, seg_y; // x .. alpha and beta .. y
    int alpha = -1, beta = -1;
    {
        auto middle = [&](const std::vector<int>& s) {
            int start = (static_cast<int>(s.size()) - (m + 1)) / 2;
            return std::pair<int, int>{start, start + m};
        };
        auto [qlo, qhi] = middle(ret);
        auto [plo, phi] = middle(trimmed);
        auto scan = [&](int skip_q, int skip_p) {
            for (int qi = qlo; qi <= qhi; ++qi) {
                if (qi == skip_q) continue;
                for (int pi = plo; pi <= phi; ++pi) {
                    if (pi == skip_p) continue;
                    if (g.has_edge(ret[qi], trimmed[pi])) return std::pair<int, int>{qi, pi};
                }
            }
            return std::pair<int, int>{-1, -1};
        };
        auto [q1, p1] = scan(-1, -1);
        if (q1 < 0) {
            std::vector<int> qs(ret.begin() + qlo, ret.begin() + qhi + 1);
            std::vector<int> ps(trimmed.begin() + plo, trimmed.begin() + phi + 1);
            out.counter = detail::biclique_from(g, qs, ps, m);
            note("no edge between the middles: complement biclique harvested");
            return out;
        }
        auto [q2, p2] = scan(q1, p1);
        if (q2 < 0) {
            std::vector<int> qs, ps;
            for (int qi = qlo; qi <= qhi; ++qi)
                if (qi != q1) qs.push_back(ret[qi]);
            for (int pi = plo; pi <= phi; ++pi)
                if (pi != p1) ps.push_back(trimmed[pi]);
            out.counter = detail::biclique_from(g, qs, ps, m);
            note("no second disjoint edge between the middles: complement biclique harvested");
            return out;
        }
        // the x-leg takes the seed prefix up to the smaller p index, then its
        // partner's side of the return path out to that side's gadget endpoint
        int pX = p1, qX = q1, pY = p2, qY = q2;
        if (pX > pY) {
            std::swap(pX, pY);
            std::swap(qX, qY);
        }
        seg_x.assign(trimmed.begin(), trimmed.begin() + pX + 1);
        std::vector<int> qy_piece; // runs qY .. its gadget endpoint
        if (qX < qY) {
            // x-leg runs down the return path to its a end
            for (int i = qX; i >= 0; --i) seg_x.push_back(ret[i]);
            alpha = jg.a;
            qy_piece.assign(ret.begin() + qY, ret.end()); // qY .. b
            beta = jg.b;
        } else {
            for (std::size_t i = qX; i < ret.size(); ++i) seg_x.push_back(ret[i]);
            alpha = jg.b;
            qy_piece.assign(ret.begin(), ret.begin() + qY + 1); // a .. qY
            std::reverse(qy_piece.begin(), qy_piece.end());     // qY .. a
            beta = jg.a;
        }
        // y-leg: gadget endpoint back to qY, jump to the seed at pY, out to y
        seg_y.assign(qy_piece.rbegin(), qy_piece.rend()); // beta .. qY
        seg_y.insert(seg_y.end(), trimmed.begin() + pY, trimmed.end());
        if (!is_path_in(g, seg_x) || seg_x.front() != x || seg_x.back() != alpha)
            throw std::logic_error("connect (reroute): x-leg is not a path from x to the gadget");
        if (!is_path_in(g, seg_y) || seg_y.front() != beta || seg_y.back() != y)
            throw std::logic_error("connect (reroute): y-leg is not a path from the gadget to y");
        if (static_cast<long long>(seg_x.size()) < 2LL * m + 2)
            fail("reroute", "x-leg shorter than 2m+2");
        note("legs of order " + std::to_string(seg_x.size()) + " and " +
             std::to_string(seg_y.size()));
    }

    // expander: clean a small B out of the leftover so the rest expands
    const VSet xset = VSet::of(g.order(), seg_x);
    const VSet yset = VSet::of(g.order(), seg_y);
    VSet bset(g.order());
    VSet hset(g.order());
    {
        VSet u = g.vertices() - (xset | yset | jg.vertices);
        BipartiteExtraction ext;
        try {
            ext = extract_bipartite_expander(g, u, m, 4, n, prof.exact_subset_limit,
                                             prof.check_samples, detail::mix_seed(seed, 302));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string("connect (expander): ") + e.what());
        }
        if (ext.status == BipartiteExtraction::Status::FreenessRefuted) {
            auto [a, b] = *ext.complement_biclique;
            out.counter = detail::biclique_from(g, a.to_vector(), b.to_vector(), m);
            note("expander extraction refuted freeness: complement biclique harvested");
            return out;
        }
        if (ext.status == BipartiteExtraction::Status::HypothesisFalsified)
            fail("expander", "absorption hypothesis falsified by a set of size " +
                                 std::to_string(ext.absorption_violator->count()));
        if (!ext.extracted()) fail("expander", "no certified expander located");
        bset = ext.removed;
        hset = ext.kept;
        note("expander |B|=" + std::to_string(bset.count()) +
             " |H|=" + std::to_string(hset.count()));
    }

    // escape edge from the x-leg's tail into the expander
    int r = -1, v = -1;
    for (int i = m + 1; i < static_cast<int>(seg_x.size()); ++i) {
        VSet cand = g.neighbors(seg_x[i]) & hset;
        int w = cand.first();
        if (w >= 0) {
            r = i;
            v = w;
            break;
        }
    }
    if (r < 0) {
        std::vector<int> tail(seg_x.begin() + m + 1, seg_x.end());
        out.counter = detail::biclique_from(g, tail, hset.to_vector(), m);
        note("x-leg tail sees nothing of the expander: complement biclique harvested");
        return out;
    }
    note("escape edge at leg position " + std::to_string(r) + " to " + std::to_string(v));

    // longest path in the expander and its rotation closure
    std::vector<int> big;
    RotationState st;
    try {
        big = longest_path_from(g, v, hset, prof);
        st = ending_vertices(g, big, prof);
    } catch (const std::runtime_error& e) {
        fail("rotation", e.what());
    }
    const VSet& sset = st.ending_vertices;
    const VSet rset = VSet::of(g.order(), big);
    if (((g.neighborhood(sset) & hset) - rset).count() != 0)
        throw std::logic_error("connect (rotation): an ending vertex extends inside the expander");
    if (static_cast<long long>(sset.count()) < 6LL * m)
        fail("rotation", "ending set of size " + std::to_string(sset.count()) +
                             " falls short of 6m (expansion shortfall)");
    {
        VSet closure = (g.neighborhood(sset) - bset) | sset;
        if (static_cast<long long>(closure.count()) < n)
            fail("rotation", "ending set of size " + std::to_string(sset.count()) +
                                 " sees only " + std::to_string(closure.count()) +
                                 " vertices < n (absorption hypothesis falsified)");
        note("path of order " + std::to_string(big.size()) + " in the expander, |S|=" +
             std::to_string(sset.count()) + ", closure " + std::to_string(closure.count()));
    }

    // landing: last vertex before the escape position adjacent to the closure
    int li = -1, s_land = -1;
    for (int i = r - 1; i >= 0; --i) {
        VSet cand = g.neighbors(seg_x[i]) & sset;
        int w = cand.first();
        if (w >= 0) {
            li = i;
            s_land = w;
            break;
        }
    }
    if (li < 0) {
        std::vector<int> prefix(seg_x.begin(), seg_x.begin() + r);
        out.counter = detail::biclique_from(g, prefix, sset.to_vector(), m);
        note("leg prefix sees nothing of the ending set: complement biclique harvested");
        return out;
    }
    note("landing at leg position " + std::to_string(li) + " on ending vertex " +
         std::to_string(s_land));

    // splice the rotated expander path into the x-leg
    {
        const std::vector<int>& rp = st.path_ending_at(s_land); // v .. s_land
        std::vector<int> nx(seg_x.begin(), seg_x.begin() + li + 1);
        nx.insert(nx.end(), rp.rbegin(), rp.rend()); // s_land .. v
        nx.insert(nx.end(), seg_x.begin() + r, seg_x.end());
        seg_x = std::move(nx);
        if (!is_path_in(g, seg_x) || seg_x.front() != x || seg_x.back() != alpha)
            throw std::logic_error("connect (splice): spliced x-leg is not a path");
    }
    long long total = static_cast<long long>(seg_x.size()) +
                      static_cast<long long>(seg_y.size()) + jg.order() - 2;
    if (total < n)
        throw std::logic_error("connect (splice): assembled order " + std::to_string(total) +
                               " below n despite the absorption checks");
    note("assembled order " + std::to_string(total));

    // shorten the legs by chords until the excess fits the witness ladder
    {
        long long budget = total - n;
        for (int pass = 0; pass < prof.chord_passes; ++pass) {
            if (budget == 0) break;
            int moved = detail::chord_sweep(g, seg_x, m, budget);
            moved += detail::chord_sweep(g, seg_y, m, budget);
            if (moved == 0) break;
        }
        total = static_cast<long long>(seg_x.size()) + static_cast<long long>(seg_y.size()) +
                jg.order() - 2;
        if (total - n > shortfall) {
            if (static_cast<long long>(seg_x.size()) >= 2LL * m + 2)
                out.counter = detail::biclique_from_chordless(g, seg_x, m);
            else if (static_cast<long long>(seg_y.size()) >= 2LL * m + 2)
                out.counter = detail::biclique_from_chordless(g, seg_y, m);
            else
                throw std::logic_error("connect (shorten): stalled with both legs short");
            note("shortening stalled at order " + std::to_string(total) +
                 ": complement biclique harvested");
            return out;
        }
        note("shortened to order " + std::to_string(total));
    }

    // trade the gadget's full witness for the one that lands the exact order
    {
        long long drop = total - n;
        std::vector<int> wit = jg.witnesses.at(static_cast<std::size_t>(drop));
        if (alpha == jg.b) std::reverse(wit.begin(), wit.end());
        if (wit.front() != alpha || wit.back() != beta)
            throw std::logic_error("connect (exact): witness endpoints disagree with the legs");
        std::vector<int> final_path = seg_x;
        final_path.insert(final_path.end(), wit.begin() + 1, wit.end() - 1);
        final_path.insert(final_path.end(), seg_y.begin(), seg_y.end());
        if (static_cast<long long>(final_path.size()) != n)
            throw std::logic_error("connect (exact): final order " +
                                   std::to_string(final_path.size()) + " is not n");
        if (!is_path_in(g, final_path) || final_path.front() != x || final_path.back() != y)
            throw std::logic_error("connect (exact): final sequence is not an x..y path");
        note("witness " + std::to_string(drop) + " closes the gap: order " + std::to_string(n));
        out.path = std::move(final_path);
    }
    return out;
}

} // namespace ramsey
