#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "embedding.hpp"
#include "profile.hpp"
#include "search.hpp"

namespace ramsey {

// A k-gadget is a vertex set J with endpoints a, b joined by two paths whose
// orders are |J| and |J|-k (kind exact), or by a full ladder of paths of every
// order |J|, |J|-1, ..., |J|-k (kind upto).  Witness paths are stored a → b;
// witnesses[i] has order |J|-i for upto gadgets, and witnesses = {full, short}
// for exact ones.

enum class GadgetKind { exact, upto };

struct Gadget {
    VSet vertices;
    int a = -1, b = -1;
    long long shortfall = 0;
    GadgetKind kind = GadgetKind::exact;
    std::vector<std::vector<int>> witnesses;

    long long order() const { return static_cast<long long>(vertices.count()); }

    nlohmann::json to_json() const {
        nlohmann::json ws = nlohmann::json::array();
        for (const auto& w : witnesses) ws.push_back(w);
        return {{"vertices", vertices.to_vector()},
                {"a", a},
                {"b", b},
                {"shortfall", shortfall},
                {"kind", kind == GadgetKind::exact ? "exact" : "upto"},
                {"witnesses", ws}};
    }
};

// Unconditional witness arithmetic: every stored path must run a → b inside
// the vertex set, be edge-valid, and have exactly the order its slot promises.
inline void assert_gadget(const Graph& g, const Gadget& j) {
    if (j.a == j.b || !j.vertices.contains(j.a) || !j.vertices.contains(j.b))
        throw std::logic_error("gadget: endpoints must be distinct members of the vertex set");
    long long n = j.order();
    if (j.shortfall < 1 || n - j.shortfall < 2)
        throw std::logic_error("gadget: shortfall out of range");
    std::size_t need = j.kind == GadgetKind::exact ? 2 : static_cast<std::size_t>(j.shortfall) + 1;
    if (j.witnesses.size() != need)
        throw std::logic_error("gadget: expected " + std::to_string(need) + " witnesses, have " +
                               std::to_string(j.witnesses.size()));
    for (std::size_t i = 0; i < need; ++i) {
        const auto& w = j.witnesses[i];
        long long drop =
            j.kind == GadgetKind::exact ? (i == 0 ? 0 : j.shortfall) : static_cast<long long>(i);
        if (static_cast<long long>(w.size()) != n - drop)
            throw std::logic_error("gadget: witness " + std::to_string(i) + " has order " +
                                   std::to_string(w.size()) + ", expected " +
                                   std::to_string(n - drop));
        if (w.front() != j.a || w.back() != j.b)
            throw std::logic_error("gadget: witness " + std::to_string(i) +
                                   " does not run a to b");
        for (int v : w)
            if (!j.vertices.contains(v))
                throw std::logic_error("gadget: witness leaves the vertex set");
        if (!is_path_in(g, w))
            throw std::logic_error("gadget: witness " + std::to_string(i) + " is not a path");
    }
}

// Attach a pendant path to one endpoint: pendant[0] must be a or b, the rest
// fresh vertices.  Every witness grows by the same amount, so the shortfall
// ladder is preserved and the far end becomes the new endpoint.
inline Gadget extend_gadget(const Graph& g, const Gadget& j, const std::vector<int>& pendant) {
    if (pendant.empty()) throw std::invalid_argument("extend gadget: empty pendant");
    bool at_a = pendant.front() == j.a;
    if (!at_a && pendant.front() != j.b)
        throw std::invalid_argument("extend gadget: pendant must start at an endpoint");
    if (!is_path_in(g, pendant))
        throw std::invalid_argument("extend gadget: pendant is not a path");
    for (std::size_t i = 1; i < pendant.size(); ++i)
        if (j.vertices.contains(pendant[i]))
            throw std::invalid_argument("extend gadget: pendant re-enters the gadget");

    Gadget out = j;
    for (std::size_t i = 1; i < pendant.size(); ++i) out.vertices.add(pendant[i]);
    if (at_a) {
        out.a = pendant.back();
        for (auto& w : out.witnesses) {
            std::vector<int> nw(pendant.rbegin(), pendant.rend());
            nw.insert(nw.end(), w.begin() + 1, w.end());
            w = std::move(nw);
        }
    } else {
        out.b = pendant.back();
        for (auto& w : out.witnesses) w.insert(w.end(), pendant.begin() + 1, pendant.end());
    }
    assert_gadget(g, out);
    return out;
}

// DFS for an a-b path of exact order q inside `within`.  Prunes on the BFS
// distance to b and expands fewest-onward-moves first; Absent with budget to
// spare is a proof no such path exists.
inline SearchResult<std::vector<int>> find_ab_path_of_order(const Graph& g, const VSet& within,
                                                            int a, int b, long long q,
                                                            SearchLimits lim = {}) {
    if (a == b || !within.contains(a) || !within.contains(b))
        throw std::invalid_argument("path search: need distinct endpoints inside the set");
    SearchResult<std::vector<int>> out;
    if (q < 2 || q > static_cast<long long>(within.count())) return out;
    std::vector<int> dist = bfs_distances(g, b, within);
    if (dist[a] < 0 || dist[a] > q - 1) return out;

    VSet used(g.order());
    used.add(a);
    std::vector<int> path{a};
    bool budget_hit = false;

    std::function<bool(int)> go = [&](int cur) -> bool {
        if (out.nodes >= lim.node_cap) {
            budget_hit = true;
            return false;
        }
        ++out.nodes;
        long long depth = static_cast<long long>(path.size());
        if (depth == q - 1) {
            if (g.has_edge(cur, b)) {
                path.push_back(b);
                return true;
            }
            return false;
        }
        VSet cset = (g.neighbors(cur) & within) - used;
        cset.remove(b);
        std::vector<std::pair<long long, int>> keyed;
        for (int x = cset.first(); x >= 0; x = cset.next(x)) {
            if (dist[x] < 0 || dist[x] > q - depth - 1) continue;
            keyed.push_back(
                {static_cast<long long>(((g.neighbors(x) & within) - used).count()), x});
        }
        std::stable_sort(keyed.begin(), keyed.end());
        for (const auto& kv : keyed) {
            int x = kv.second;
            path.push_back(x);
            used.add(x);
            if (go(x)) return true;
            path.pop_back();
            used.remove(x);
            if (budget_hit) return false;
        }
        return false;
    };

    if (go(a)) {
        out.status = SearchStatus::Found;
        out.witness = path;
    } else {
        out.status = budget_hit ? SearchStatus::Budget : SearchStatus::Absent;
    }
    return out;
}

// Verdict of checking a claimed gadget from scratch.  Refuted means some
// required path order was proved absent by exhausted search; Indeterminate
// means the node budget ran out before every order was settled.
struct GadgetVerdict {
    enum class Status { Verified, Refuted, Indeterminate };
    Status status = Status::Indeterminate;
    std::optional<Gadget> gadget;             // populated when Verified
    std::vector<long long> missing_orders;    // proved absent
    std::vector<long long> unsettled_orders;  // budget ran out
    std::uint64_t nodes = 0;

    const char* status_name() const {
        switch (status) {
            case Status::Verified: return "verified";
            case Status::Refuted: return "refuted";
            default: return "indeterminate";
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json out{{"status", status_name()}, {"nodes", nodes}};
        if (gadget) out["gadget"] = gadget->to_json();
        if (!missing_orders.empty()) out["missing_orders"] = missing_orders;
        if (!unsettled_orders.empty()) out["unsettled_orders"] = unsettled_orders;
        return out;
    }
};

inline GadgetVerdict verify_gadget(const Graph& g, const VSet& j, int a, int b, long long k,
                                   GadgetKind kind, SearchLimits lim = {}) {
    if (a == b || !j.contains(a) || !j.contains(b))
        throw std::invalid_argument("verify gadget: endpoints must be distinct members of J");
    long long n = j.count();
    if (k < 1 || n - k < 2) throw std::invalid_argument("verify gadget: shortfall out of range");

    auto [sub, map] = g.induced(j);
    std::vector<int> inv(g.order(), -1);
    for (int i = 0; i < sub.order(); ++i) inv[map[i]] = i;

    std::vector<long long> orders;
    if (kind == GadgetKind::exact) {
        orders = {n, n - k};
    } else {
        for (long long t = 0; t <= k; ++t) orders.push_back(n - t);
    }

    GadgetVerdict out;
    Gadget cand;
    cand.vertices = j;
    cand.a = a;
    cand.b = b;
    cand.shortfall = k;
    cand.kind = kind;

    std::uint64_t remaining = lim.node_cap;
    for (long long q : orders) {
        auto r = find_ab_path_of_order(sub, sub.vertices(), inv[a], inv[b], q,
                                       SearchLimits{remaining});
        out.nodes += r.nodes;
        remaining = remaining > r.nodes ? remaining - r.nodes : 0;
        if (r.found()) {
            std::vector<int> w;
            w.reserve(r.witness->size());
            for (int v : *r.witness) w.push_back(map[v]);
            cand.witnesses.push_back(std::move(w));
        } else if (r.status == SearchStatus::Absent) {
            out.missing_orders.push_back(q);
        } else {
            out.unsettled_orders.push_back(q);
        }
    }
    if (!out.missing_orders.empty()) {
        out.status = GadgetVerdict::Status::Refuted;
    } else if (!out.unsettled_orders.empty()) {
        out.status = GadgetVerdict::Status::Indeterminate;
    } else {
        out.status = GadgetVerdict::Status::Verified;
        assert_gadget(g, cand);
        out.gadget = std::move(cand);
    }
    return out;
}

// A tree embedded in the host: images[node] is the vertex carrying spec node,
// images[0] the root.
struct EmbeddedTree {
    int root = -1;
    RootedTreeSpec spec;
    std::vector<int> images;
    VSet set;

    nlohmann::json to_json() const { return {{"root", root}, {"images", images}}; }
};

// A constructed gadget together with the endpoint trees that survive for
// later joining, and the budgeted re-verification outcome.
struct BuiltGadget {
    Gadget gadget;
    EmbeddedTree tree_a, tree_b;  // meet the gadget exactly at a resp. b
    long long zigzag_pairs = 0;   // spliced path count of the one-shot build
    std::string reverify;         // "verified" or "indeterminate"
    std::vector<std::string> trace;

    nlohmann::json to_json() const {
        return {{"gadget", gadget.to_json()},  {"tree_a", tree_a.to_json()},
                {"tree_b", tree_b.to_json()},  {"zigzag_pairs", zigzag_pairs},
                {"reverify", reverify},        {"trace", trace}};
    }
};

namespace detail {

inline std::vector<int> remap_path(const std::vector<int>& p, const std::vector<int>& map) {
    std::vector<int> out;
    out.reserve(p.size());
    for (int v : p) out.push_back(map[v]);
    return out;
}

inline VSet remap_set(const VSet& s, const std::vector<int>& map, int universe) {
    VSet out(universe);
    for (int v = s.first(); v >= 0; v = s.next(v)) out.add(map[v]);
    return out;
}

inline Gadget remap_gadget(const Gadget& j, const std::vector<int>& map, int universe) {
    Gadget out = j;
    out.vertices = remap_set(j.vertices, map, universe);
    out.a = map[j.a];
    out.b = map[j.b];
    out.witnesses.clear();
    for (const auto& w : j.witnesses) out.witnesses.push_back(remap_path(w, map));
    return out;
}

inline EmbeddedTree remap_tree(const EmbeddedTree& t, const std::vector<int>& map, int universe) {
    EmbeddedTree out;
    out.root = map[t.root];
    out.spec = t.spec;
    out.images = remap_path(t.images, map);
    out.set = remap_set(t.set, map, universe);
    return out;
}

inline std::vector<int> climb_to_root(const EmbeddedTree& t, int v) {
    int node = -1;
    for (std::size_t i = 0; i < t.images.size(); ++i)
        if (t.images[i] == v) {
            node = static_cast<int>(i);
            break;
        }
    if (node < 0) throw std::logic_error("gadget: climb start is not a tree image");
    std::vector<int> up;
    for (; node >= 0; node = t.spec.parent[node]) up.push_back(t.images[node]);
    return up;  // v .. root
}

// Zig-zag through the labeled cycle a, j_1..j_r, x_1..x_t, b, y_t..y_1 and the
// spliced paths ps[i] (running x_{i+1} → y_{i+1}).  With the window the walk
// enters at x_1 and uses every vertex; without it the walk enters at y_1 and
// misses exactly the window.  Consecutive same-letter steps are cycle edges.
inline std::vector<int> gadget_zigzag(int a, const std::vector<int>& js, int b,
                                      const std::vector<std::vector<int>>& ps, bool with_window) {
    std::vector<int> q{a};
    if (with_window) q.insert(q.end(), js.begin(), js.end());
    int t = static_cast<int>(ps.size());
    for (int i = 0; i < t; ++i) {
        bool forward = with_window ? (i % 2 == 0) : (i % 2 == 1);
        const auto& p = ps[i];
        if (forward)
            q.insert(q.end(), p.begin(), p.end());
        else
            q.insert(q.end(), p.rbegin(), p.rend());
    }
    q.push_back(b);
    return q;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// One-shot construction of an exact r-gadget (r odd): extract a multipartite
// expander, find a long odd cycle with r consecutive vertices reserved as the
// removable window, grow a tree at each endpoint, splice the crossing pairs of
// the remaining arc, and read off the two zig-zag witnesses.
inline BuiltGadget build_small_gadget(const Graph& g, int m, int k, int r,
                                      const ConstantsProfile& prof = ConstantsProfile::desk(),
                                      std::uint64_t seed = 0) {
    if (m < 1 || k < 1) throw std::invalid_argument("small gadget: need m >= 1 and k >= 1");
    if (r < 1 || r % 2 == 0) throw std::invalid_argument("small gadget: r must be odd");
    if (r > m) throw std::invalid_argument("small gadget: need r <= m");
    if (static_cast<double>(g.order()) < prof.small_gadget_coeff * k * static_cast<double>(m))
        throw std::invalid_argument("small gadget: host below the profile threshold (needs " +
                                    std::to_string(ceil_ll(prof.small_gadget_coeff * k *
                                                           static_cast<double>(m))) +
                                    " vertices)");

    BuiltGadget out;
    auto note = [&](std::string s) { out.trace.push_back(std::move(s)); };

    // extraction
    auto ext = extract_multipartite_expander(g, m, k, ceil_ll(prof.small_M),
                                             ceil_ll(prof.small_delta), ceil_ll(prof.small_beta),
                                             prof.exact_subset_limit, prof.check_samples, seed);
    if (ext.status == MultipartiteExtraction::Status::FreenessRefuted)
        throw std::runtime_error(
            "small gadget (extraction): complement holds a large complete multipartite graph");
    if (!ext.extracted())
        throw std::runtime_error("small gadget (extraction): no certified expander located");
    auto [g1, map1] = g.induced(ext.h);
    note("extracted k'=" + std::to_string(ext.k_out) + " order=" + std::to_string(g1.order()));

    // long odd cycle with the window reserved
    ExpansionParams pc{std::max<long long>(ceil_ll(prof.small_delta), 20), 0, m};
    pc.beta = std::max<long long>(ceil_ll(prof.small_beta), 8 * pc.delta);
    LongOddCycle loc;
    try {
        loc = long_odd_cycle(g1, pc, r, prof.exact_subset_limit, prof.check_samples,
                             detail::mix_seed(seed, 1), static_cast<int>(prof.slack));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("small gadget (cycle): ") + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("small gadget (cycle): ") + e.what());
    }

    // label the cycle around the window: a, j_1..j_r, x_1..x_t, b, y_t..y_1
    const std::vector<int>& cyc = loc.cycle.vertices;
    int L = static_cast<int>(cyc.size());
    int t = (L - r - 2) / 2;
    int off = static_cast<int>(std::find(cyc.begin(), cyc.end(), loc.reserved[0]) - cyc.begin());
    for (int i = 0; i < r; ++i)
        if (cyc[(off + i) % L] != loc.reserved[i])
            throw std::logic_error("small gadget: window is not a forward arc of the cycle");
    auto at = [&](int i) { return cyc[((off + i) % L + L) % L]; };
    int va = at(-1), vb = at(r + t);
    std::vector<int> js(loc.reserved), xs(t), ys(t);
    for (int i = 0; i < t; ++i) xs[i] = at(r + i);
    for (int i = 0; i < t; ++i) ys[i] = at(r + 2 * t - i);
    note("cycle order=" + std::to_string(L) + " pairs=" + std::to_string(t) + " via " +
         loc.construction);
    out.zigzag_pairs = t;

    // endpoint trees in the residual expander
    auto [g2, map2] = g1.induced(loc.kept);
    std::vector<int> inv2(g1.order(), -1);
    for (int i = 0; i < g2.order(); ++i) inv2[map2[i]] = i;
    std::vector<int> remnant{va, vb};
    remnant.insert(remnant.end(), xs.begin(), xs.end());
    remnant.insert(remnant.end(), ys.begin(), ys.end());
    VSet w2 = g2.vertices();
    for (int v : remnant) w2.remove(inv2[v]);

    long long tree_order =
        std::max<long long>(1, std::min<long long>(m, prof.tree_order_cap));
    long long d_res = std::max<long long>(0, pc.delta / 4 - 7);
    long long delta_t = std::max<long long>(d_res, 12);
    long long dt = delta_t / 4;
    long long total = 2LL * t + 2 * tree_order;
    long long beta_t =
        std::max({pc.beta - 3, 20 * dt, 10 * dt + (total + m - 1) / m + 1});
    ExpansionParams pt{delta_t, beta_t, m};
    std::vector<std::pair<int, RootedTreeSpec>> roots{
        {inv2[va], RootedTreeSpec::binary(static_cast<int>(tree_order))},
        {inv2[vb], RootedTreeSpec::binary(static_cast<int>(tree_order))}};
    EmbeddedForest forest;
    try {
        forest = embed_forest(g2, w2, pt, roots, prof.exact_subset_limit, prof.check_samples,
                              detail::mix_seed(seed, 2));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("small gadget (trees): ") + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("small gadget (trees): ") + e.what());
    }

    auto host_of_2 = [&](int v) { return map1[map2[v]]; };
    auto lift_tree = [&](std::size_t idx, int root_host) {
        EmbeddedTree et;
        et.root = root_host;
        et.spec = roots[idx].second;
        et.set = VSet(g.order());
        for (int v : forest.images[idx]) {
            et.images.push_back(host_of_2(v));
            et.set.add(et.images.back());
        }
        return et;
    };
    out.tree_a = lift_tree(0, map1[va]);
    out.tree_b = lift_tree(1, map1[vb]);
    note("trees order=" + std::to_string(tree_order) +
         " residual=" + (forest.residual.falsified() ? "falsified" : "stands"));

    // splice the crossing pairs of the long arc
    std::vector<std::vector<int>> ps;
    if (t > 0) {
        VSet drop = forest.used;
        drop.remove(inv2[va]);
        drop.remove(inv2[vb]);
        auto [g3, map3] = g2.induced(g2.vertices() - drop);
        std::vector<int> inv3(g2.order(), -1);
        for (int i = 0; i < g3.order(); ++i) inv3[map3[i]] = i;
        VSet w3 = g3.vertices();
        for (int v : remnant) w3.remove(inv3[inv2[v]]);

        long long delta_p = std::max<long long>(pt.delta / 4, 16);
        long long removed = static_cast<long long>(drop.count());
        long long n3 = g3.order();
        long long bp = std::max<long long>(beta_t - (removed + m - 1) / m, 81);
        for (;; ++bp) {
            if (bp > 2'000'000'000LL)
                throw std::runtime_error("small gadget (pairs): no workable beta claim");
            long long bm = bp * m;
            long long ell = static_cast<long long>(std::ceil(
                4.0 * n3 / static_cast<double>(bm) + 10.0 * std::log2(std::max<long long>(2, bm))));
            if ((bp - 80) * m >= 4 * ell * t * t + (2LL * t + 2)) break;
        }
        ExpansionParams pp{delta_p, bp, m};
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < t; ++i)
            pairs.push_back({inv3[inv2[xs[i]]], inv3[inv2[ys[i]]]});
        PathSystem sys;
        try {
            sys = connect_pairs(g3, w3, pp, pairs, prof.exact_subset_limit, prof.check_samples,
                                detail::mix_seed(seed, 3), static_cast<int>(prof.slack));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("small gadget (pairs): ") + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string("small gadget (pairs): ") + e.what());
        }
        for (const auto& p : sys.paths) {
            std::vector<int> hp;
            hp.reserve(p.size());
            for (int v : p) hp.push_back(map1[map2[map3[v]]]);
            ps.push_back(std::move(hp));
        }
    }

    // assemble in host coordinates
    int ha = map1[va], hb = map1[vb];
    std::vector<int> hjs;
    for (int v : js) hjs.push_back(map1[v]);

    Gadget j;
    j.a = ha;
    j.b = hb;
    j.shortfall = r;
    j.kind = GadgetKind::exact;
    j.vertices = VSet(g.order());
    for (int v : cyc) j.vertices.add(map1[v]);
    for (const auto& p : ps)
        for (int v : p) j.vertices.add(v);
    j.witnesses.push_back(detail::gadget_zigzag(ha, hjs, hb, ps, true));
    j.witnesses.push_back(detail::gadget_zigzag(ha, hjs, hb, ps, false));
    assert_gadget(g, j);
    note("gadget order=" + std::to_string(j.order()) + " shortfall=" + std::to_string(r));
    out.gadget = std::move(j);

    // trees meet the gadget exactly at their roots
    if ((out.tree_a.set & out.gadget.vertices).count() != 1 ||
        (out.tree_b.set & out.gadget.vertices).count() != 1)
        throw std::logic_error("small gadget: endpoint tree re-enters the gadget");

    auto verdict = verify_gadget(
        g, out.gadget.vertices, out.gadget.a, out.gadget.b, r, GadgetKind::exact,
        SearchLimits{static_cast<std::uint64_t>(std::max<long long>(4096, prof.search_nodes / 64))});
    if (verdict.status == GadgetVerdict::Status::Refuted)
        throw std::logic_error("small gadget: verifier refuted a witnessed gadget");
    out.reverify = verdict.status_name();
    note("reverify=" + out.reverify);
    return out;
}

// Doubling construction: starting from a 1-gadget, each level joins the
// current (<=2^{s-1})-gadget to a fresh exact (2^{s-1}+1)-gadget built in the
// untouched part of the same expander, connected tree-to-tree.  Composite
// witnesses realize every shortfall up to 2^s, giving a (<=2^r)-gadget.
inline BuiltGadget build_doubling_gadget(const Graph& g, int m, int k, int r,
                                         const ConstantsProfile& prof = ConstantsProfile::desk(),
                                         std::uint64_t seed = 0) {
    if (m < 1 || k < 1) throw std::invalid_argument("doubling gadget: need m >= 1 and k >= 1");
    if (r < 1) throw std::invalid_argument("doubling gadget: need r >= 1");
    if (r >= 62 || (1LL << r) > m)
        throw std::invalid_argument("doubling gadget: need 2^r <= m");
    if (static_cast<double>(g.order()) < prof.dbl_gadget_coeff * k * static_cast<double>(m))
        throw std::invalid_argument("doubling gadget: host below the profile threshold (needs " +
                                    std::to_string(ceil_ll(prof.dbl_gadget_coeff * k *
                                                           static_cast<double>(m))) +
                                    " vertices)");

    BuiltGadget out;
    auto note = [&](std::string s) { out.trace.push_back(std::move(s)); };

    auto ext = extract_multipartite_expander(g, m, k, ceil_ll(prof.dbl_M),
                                             ceil_ll(prof.dbl_delta), ceil_ll(prof.dbl_beta),
                                             prof.exact_subset_limit, prof.check_samples, seed);
    if (ext.status == MultipartiteExtraction::Status::FreenessRefuted)
        throw std::runtime_error(
            "doubling gadget (extraction): complement holds a large complete multipartite graph");
    if (!ext.extracted())
        throw std::runtime_error("doubling gadget (extraction): no certified expander located");
    auto [gp, mapp] = g.induced(ext.h);
    note("extracted k'=" + std::to_string(ext.k_out) + " order=" + std::to_string(gp.order()));

    // base: an exact 1-gadget inside the expander
    BuiltGadget cur;
    try {
        cur = build_small_gadget(gp, m, k, 1, prof, detail::mix_seed(seed, 100));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("doubling gadget (base): ") + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("doubling gadget (base): ") + e.what());
    }
    note("base order=" + std::to_string(cur.gadget.order()));

    for (int s = 1; s <= r; ++s) {
        int rp = s == 1 ? 1 : (1 << (s - 1)) + 1;
        VSet blocked = cur.gadget.vertices | cur.tree_a.set | cur.tree_b.set;
        auto [hs, maph] = gp.induced(gp.vertices() - blocked);
        BuiltGadget fresh;
        try {
            fresh = build_small_gadget(hs, m, k, rp, prof, detail::mix_seed(seed, 100 + s));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("doubling gadget (level " + std::to_string(s) + "): " +
                                     e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("doubling gadget (level " + std::to_string(s) + "): " +
                                     e.what());
        }
        Gadget jn = detail::remap_gadget(fresh.gadget, maph, gp.order());
        EmbeddedTree ta_n = detail::remap_tree(fresh.tree_a, maph, gp.order());
        EmbeddedTree tb_n = detail::remap_tree(fresh.tree_b, maph, gp.order());

        // connector from the current a through its tree, across, and down the
        // new gadget's b-side tree
        VSet A = cur.tree_a.set, B = tb_n.set;
        VSet C = cur.gadget.vertices | jn.vertices | cur.tree_b.set | ta_n.set;
        C.remove(cur.gadget.a);
        C.remove(jn.b);
        long long cc = C.count();
        long long minab = std::min<long long>(A.count(), B.count());
        ExpansionParams pq{(cc + minab - 1) / minab + 2,
                           std::max<long long>(1, (2 * cc + m - 1) / m), m};
        std::vector<int> p;
        try {
            p = connect_avoiding(gp, gp.vertices(), pq, A, B, C, static_cast<int>(prof.slack));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("doubling gadget (connector " + std::to_string(s) + "): " +
                                     e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("doubling gadget (connector " + std::to_string(s) + "): " +
                                     e.what());
        }
        auto up_a = detail::climb_to_root(cur.tree_a, p.front());
        std::vector<int> q(up_a.rbegin(), up_a.rend());
        q.insert(q.end(), p.begin() + 1, p.end());
        auto up_b = detail::climb_to_root(tb_n, p.back());
        q.insert(q.end(), up_b.begin() + 1, up_b.end());
        if (q.front() != cur.gadget.a || q.back() != jn.b || !is_path_in(gp, q))
            throw std::logic_error("doubling gadget: connector is not an a-b' path");
        VSet qs = VSet::of(gp.order(), q);
        VSet meet = qs & (cur.gadget.vertices | jn.vertices | cur.tree_b.set | ta_n.set);
        meet.remove(cur.gadget.a);
        meet.remove(jn.b);
        if (!meet.empty())
            throw std::logic_error("doubling gadget: connector re-enters the construction");

        // composite witnesses: new piece, connector reversed, old piece
        long long span = 1LL << s;
        long long modulus = s == 1 ? 2 : (1LL << (s - 1)) + 1;
        Gadget nj;
        nj.vertices = cur.gadget.vertices | jn.vertices | qs;
        nj.a = jn.a;
        nj.b = cur.gadget.b;
        nj.kind = GadgetKind::upto;
        nj.shortfall = span;
        if (static_cast<long long>(nj.vertices.count()) !=
            cur.gadget.order() + jn.order() + static_cast<long long>(q.size()) - 2)
            throw std::logic_error("doubling gadget: pieces overlap");
        for (long long tt = 0; tt <= span; ++tt) {
            long long u, v;
            if (s == 1) {
                u = std::min<long long>(tt, 1);
                v = tt - u;
            } else {
                u = tt % modulus;
                v = tt / modulus;
            }
            std::vector<int> wit = jn.witnesses[static_cast<std::size_t>(v)];
            wit.insert(wit.end(), q.rbegin() + 1, q.rend());
            const auto& wu = cur.gadget.witnesses[static_cast<std::size_t>(u)];
            wit.insert(wit.end(), wu.begin() + 1, wu.end());
            nj.witnesses.push_back(std::move(wit));
        }
        assert_gadget(gp, nj);
        note("level " + std::to_string(s) + " piece=" + std::to_string(jn.order()) +
             " connector=" + std::to_string(q.size()) + " order=" + std::to_string(nj.order()));
        cur.gadget = std::move(nj);
        cur.tree_a = ta_n;  // the new a-side tree takes over; tree_b survives
    }

    out.gadget = detail::remap_gadget(cur.gadget, mapp, g.order());
    out.tree_a = detail::remap_tree(cur.tree_a, mapp, g.order());
    out.tree_b = detail::remap_tree(cur.tree_b, mapp, g.order());
    assert_gadget(g, out.gadget);
    if ((out.tree_a.set & out.gadget.vertices).count() != 1 ||
        (out.tree_b.set & out.gadget.vertices).count() != 1)
        throw std::logic_error("doubling gadget: endpoint tree re-enters the gadget");

    auto verdict = verify_gadget(
        g, out.gadget.vertices, out.gadget.a, out.gadget.b, out.gadget.shortfall,
        GadgetKind::upto,
        SearchLimits{static_cast<std::uint64_t>(std::max<long long>(4096, prof.search_nodes / 64))});
    if (verdict.status == GadgetVerdict::Status::Refuted)
        throw std::logic_error("doubling gadget: verifier refuted a witnessed gadget");
    out.reverify = verdict.status_name();
    note("reverify=" + out.reverify);
    return out;
}

// A (<=lambda*m)-gadget of order exactly (lambda+mu)*m together with a return
// path of order mu*m joining its endpoints outside the gadget.
struct GadgetWithReturn {
    Gadget gadget;
    std::vector<int> return_path;  // gadget.a .. gadget.b, meets the gadget only there
    std::string reverify;
    std::vector<std::string> trace;

    nlohmann::json to_json() const {
        return {{"gadget", gadget.to_json()},
                {"return_path", return_path},
                {"reverify", reverify},
                {"trace", trace}};
    }
};

// Two doubled gadgets at scale lambda*m are tied together by a connector at
// each end; the excess of the assembly over (lambda+2*mu)*m picks which
// witness of the first gadget closes the loop, and cutting the resulting long
// path after mu*m vertices leaves the return path and the gadget.
inline GadgetWithReturn build_gadget_with_return(const Graph& g, int m, int k, long long lambda,
                                                 long long mu,
                                                 const ConstantsProfile& prof =
                                                     ConstantsProfile::desk(),
                                                 std::uint64_t seed = 0) {
    if (m < 1 || k < 1 || lambda < 1 || mu < 1)
        throw std::invalid_argument("gadget with return: need positive m, k, lambda, mu");
    if (static_cast<double>(lambda) < prof.min_two_mu * static_cast<double>(mu))
        throw std::invalid_argument("gadget with return: need lambda >= 2*mu");
    double lm = static_cast<double>(lambda) * m;
    if (static_cast<double>(mu) * m < prof.gwr_34_coeff * std::pow(lm, 0.75))
        throw std::invalid_argument(
            "gadget with return: mu*m below the three-quarters threshold");
    if (static_cast<double>(g.order()) <
        prof.N1 * static_cast<double>(lambda) * static_cast<double>(mu) * k *
            static_cast<double>(m))
        throw std::invalid_argument("gadget with return: host below the profile threshold");
    long long mt = lambda * m;
    if (mt > (1LL << 30)) throw std::invalid_argument("gadget with return: lambda*m too large");
    int r = 0;
    while ((1LL << r) < mt) ++r;
    if ((1LL << r) != mt)
        throw std::invalid_argument(
            "gadget with return: lambda*m must be a power of two (doubling depth)");

    GadgetWithReturn out;
    auto note = [&](std::string s) { out.trace.push_back(std::move(s)); };

    auto ext = extract_multipartite_expander(
        g, static_cast<int>(mt), k, ceil_ll(prof.gwr_M), ceil_ll(prof.gwr_delta),
        ceil_ll(prof.gwr_beta), prof.exact_subset_limit, prof.check_samples, seed);
    if (ext.status == MultipartiteExtraction::Status::FreenessRefuted)
        throw std::runtime_error(
            "gadget with return (extraction): complement holds a large complete multipartite "
            "graph");
    if (!ext.extracted())
        throw std::runtime_error("gadget with return (extraction): no certified expander located");
    auto [gpp, mapp] = g.induced(ext.h);
    note("extracted k'=" + std::to_string(ext.k_out) + " order=" + std::to_string(gpp.order()));

    BuiltGadget j1;
    try {
        j1 = build_doubling_gadget(gpp, static_cast<int>(mt), k, r, prof,
                                   detail::mix_seed(seed, 201));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("gadget with return (first gadget): ") + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("gadget with return (first gadget): ") + e.what());
    }
    VSet rem = gpp.vertices() - (j1.gadget.vertices | j1.tree_a.set | j1.tree_b.set);
    auto [h2, map2] = gpp.induced(rem);
    BuiltGadget j2;
    try {
        j2 = build_doubling_gadget(h2, static_cast<int>(mt), k, r, prof,
                                   detail::mix_seed(seed, 202));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("gadget with return (second gadget): ") + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("gadget with return (second gadget): ") + e.what());
    }
    j2.gadget = detail::remap_gadget(j2.gadget, map2, gpp.order());
    j2.tree_a = detail::remap_tree(j2.tree_a, map2, gpp.order());
    j2.tree_b = detail::remap_tree(j2.tree_b, map2, gpp.order());
    note("pieces " + std::to_string(j1.gadget.order()) + " and " +
         std::to_string(j2.gadget.order()));

    if (j2.gadget.order() > (lambda + mu) * m)
        throw std::runtime_error("gadget with return (cut): second gadget too large (" +
                                 std::to_string(j2.gadget.order()) + " > " +
                                 std::to_string((lambda + mu) * m) + ")");

    // connector between the a-side trees
    VSet forbidden = j1.gadget.vertices | j2.gadget.vertices | j1.tree_b.set | j2.tree_b.set;
    std::vector<int> qa;
    {
        VSet A = j1.tree_a.set, B = j2.tree_a.set;
        VSet C = forbidden;
        C.remove(j1.gadget.a);
        C.remove(j2.gadget.a);
        long long cc = C.count();
        long long minab = std::min<long long>(A.count(), B.count());
        ExpansionParams pq{(cc + minab - 1) / minab + 2,
                           std::max<long long>(1, (2 * cc + mt - 1) / mt), static_cast<int>(mt)};
        std::vector<int> p;
        try {
            p = connect_avoiding(gpp, gpp.vertices(), pq, A, B, C, static_cast<int>(prof.slack));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("gadget with return (a-connector): ") + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string("gadget with return (a-connector): ") + e.what());
        }
        auto up1 = detail::climb_to_root(j1.tree_a, p.front());
        qa.assign(up1.rbegin(), up1.rend());
        qa.insert(qa.end(), p.begin() + 1, p.end());
        auto up2 = detail::climb_to_root(j2.tree_a, p.back());
        qa.insert(qa.end(), up2.begin() + 1, up2.end());
        if (qa.front() != j1.gadget.a || qa.back() != j2.gadget.a || !is_path_in(gpp, qa))
            throw std::logic_error("gadget with return: a-connector is not an a1-a2 path");
        VSet meet = VSet::of(gpp.order(), qa) & forbidden;
        meet.remove(j1.gadget.a);
        meet.remove(j2.gadget.a);
        if (!meet.empty())
            throw std::logic_error("gadget with return: a-connector re-enters the construction");
    }
    VSet qa_set = VSet::of(gpp.order(), qa);

    // direct connector between the base endpoints
    std::vector<int> qb;
    {
        VSet A = VSet::of(gpp.order(), {j1.gadget.b});
        VSet B = VSet::of(gpp.order(), {j2.gadget.b});
        VSet C = forbidden | qa_set;
        C.remove(j1.gadget.b);
        C.remove(j2.gadget.b);
        long long cc = C.count();
        ExpansionParams pq{cc + 2, std::max<long long>(1, (2 * cc + mt - 1) / mt),
                           static_cast<int>(mt)};
        try {
            qb = connect_avoiding(gpp, gpp.vertices(), pq, A, B, C, static_cast<int>(prof.slack));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("gadget with return (b-connector): ") + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string("gadget with return (b-connector): ") + e.what());
        }
    }
    note("connectors " + std::to_string(qa.size()) + " and " + std::to_string(qb.size()));

    // the excess picks the closing witness of the first gadget
    VSet assembly = j1.gadget.vertices | j2.gadget.vertices | qa_set | VSet::of(gpp.order(), qb);
    long long excess =
        static_cast<long long>(assembly.count()) - (lambda + 2 * mu) * m + 2;
    note("excess=" + std::to_string(excess));
    if (excess < 0 || excess > mt)
        throw std::runtime_error("gadget with return (sandwich): excess " +
                                 std::to_string(excess) + " outside [0, " + std::to_string(mt) +
                                 "]");

    const std::vector<int>& q1 = j1.gadget.witnesses[static_cast<std::size_t>(excess)];
    std::vector<int> path(qa.rbegin(), qa.rend());  // a2 .. a1
    path.insert(path.end(), q1.begin() + 1, q1.end());
    path.insert(path.end(), qb.begin() + 1, qb.end());  // .. b2
    long long tlen = static_cast<long long>(path.size());
    if (tlen != (lambda + 2 * mu) * m - j2.gadget.order())
        throw std::logic_error("gadget with return: composite path has the wrong order");
    if (!is_path_in(gpp, path))
        throw std::logic_error("gadget with return: composite path is not a path");
    if (tlen < mu * m)
        throw std::runtime_error("gadget with return (cut): composite path shorter than mu*m");

    // cut: the first mu*m vertices form the return path; the tail rides on the
    // second gadget as a pendant at b2
    std::vector<int> ret(path.begin(), path.begin() + static_cast<std::size_t>(mu * m));
    std::vector<int> pend(path.rbegin(),
                          path.rend() - static_cast<std::size_t>(mu * m) + 1);  // b2 .. new b
    Gadget j = pend.size() >= 2 ? extend_gadget(gpp, j2.gadget, pend) : j2.gadget;
    if (j.order() != (lambda + mu) * m)
        throw std::logic_error("gadget with return: gadget order is not (lambda+mu)*m");
    if (static_cast<long long>(ret.size()) != mu * m)
        throw std::logic_error("gadget with return: return path order is not mu*m");
    if (ret.front() != j.a || ret.back() != j.b)
        throw std::logic_error("gadget with return: return path endpoints mismatch");
    VSet overlap = VSet::of(gpp.order(), ret) & j.vertices;
    overlap.remove(j.a);
    overlap.remove(j.b);
    if (!overlap.empty())
        throw std::logic_error("gadget with return: return path re-enters the gadget");

    out.gadget = detail::remap_gadget(j, mapp, g.order());
    out.return_path = detail::remap_path(ret, mapp);
    assert_gadget(g, out.gadget);
    note("gadget order=" + std::to_string(out.gadget.order()) +
         " return=" + std::to_string(out.return_path.size()));

    auto verdict = verify_gadget(
        g, out.gadget.vertices, out.gadget.a, out.gadget.b, out.gadget.shortfall,
        GadgetKind::upto,
        SearchLimits{static_cast<std::uint64_t>(std::max<long long>(4096, prof.search_nodes / 64))});
    if (verdict.status == GadgetVerdict::Status::Refuted)
        throw std::logic_error("gadget with return: verifier refuted a witnessed gadget");
    out.reverify = verdict.status_name();
    note("reverify=" + out.reverify);
    return out;
}

}  // namespace ramsey
