#pragma once

// Cyclic arrangements of ladder gadgets.  t disjoint gadgets J_1..J_t are
// linked by disjoint paths Q_i running from J_i's b-endpoint to J_{i+1}'s
// a-endpoint (indices mod t); swapping each gadget's spine for a shorter
// witness realizes every cycle length in a contiguous range.  This header
// provides the verifier, the exact-length extractor, the routine joining two
// arrangements through a fan of disjoint paths, and the closure of a chain of
// gadget-with-return units into a single arrangement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ramsey/gadget.hpp"

namespace ramsey {

struct GadgetCycle {
    std::vector<Gadget> gadgets;
    // connectors[i] runs from gadgets[i].b to gadgets[(i+1) % t].a, inclusive
    std::vector<std::vector<int>> connectors;
    long long a = 0;  // shortest guaranteed cycle length
    long long b = 0;  // longest guaranteed cycle length
    long long m = 0;  // bound on every gadget's order
    long long k = 0;  // common ladder depth: every gadget drops 0..k

    long long order() const {
        long long n = 0;
        for (const auto& j : gadgets) n += j.order();
        for (const auto& q : connectors) n += static_cast<long long>(q.size()) - 2;
        return n;
    }

    nlohmann::json to_json() const {
        nlohmann::json gs = nlohmann::json::array();
        for (const auto& j : gadgets) gs.push_back(j.to_json());
        return nlohmann::json{{"gadgets", gs}, {"connectors", connectors},
                              {"a", a},        {"b", b},
                              {"m", m},        {"k", k}};
    }
};

struct GadgetCycleVerdict {
    bool ok = false;
    long long total = 0;  // order of the union, counted once
    std::vector<std::string> failures;

    bool mentions(const std::string& tag) const {
        for (const auto& f : failures)
            if (f.find(tag) != std::string::npos) return true;
        return false;
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"ok", ok}, {"total", total}, {"failures", failures}};
    }
};

// vertex sequence spine_1 Q_1 spine_2 Q_2 ... using each gadget's full witness
inline std::vector<int> cycle_traversal(const GadgetCycle& c) {
    std::vector<int> seq;
    for (std::size_t i = 0; i < c.gadgets.size(); ++i) {
        const auto& w = c.gadgets[i].witnesses.at(0);
        seq.insert(seq.end(), w.begin(), w.end());
        const auto& q = c.connectors[i];
        if (q.size() > 2) seq.insert(seq.end(), q.begin() + 1, q.end() - 1);
    }
    return seq;
}

// largest contiguous drop prefix a gadget's witnesses support
inline long long ladder_capacity(const Gadget& j) {
    if (j.kind == GadgetKind::upto) return j.shortfall;
    return j.shortfall == 1 ? 1 : 0;
}

inline GadgetCycleVerdict verify_gadget_cycle(const Graph& g, const GadgetCycle& c) {
    GadgetCycleVerdict v;
    auto fail = [&](std::string s) { v.failures.push_back(std::move(s)); };
    const std::size_t t = c.gadgets.size();
    if (t == 0) {
        fail("clause (i): no gadgets");
        return v;
    }
    if (c.connectors.size() != t) {
        fail("clause (i): need exactly one connector per gadget");
        return v;
    }

    for (std::size_t i = 0; i < t; ++i) {
        try {
            assert_gadget(g, c.gadgets[i]);
        } catch (const std::logic_error& e) {
            fail("witness: gadget " + std::to_string(i) + ": " + e.what());
        }
    }

    // every vertex belongs to one gadget or one connector interior, never two
    VSet gadget_union(g.order());
    VSet seen(g.order());
    bool overlap = false;
    auto claim = [&](int x) {
        if (seen.contains(x)) overlap = true;
        seen.add(x);
    };
    for (const auto& j : c.gadgets) {
        gadget_union |= j.vertices;
        for (int x = j.vertices.first(); x >= 0; x = j.vertices.next(x)) claim(x);
    }
    for (const auto& q : c.connectors)
        for (std::size_t p = 1; p + 1 < q.size(); ++p) claim(q[p]);
    if (overlap) fail("clause (i): gadgets and connector interiors overlap");
    v.total = seen.count();

    for (std::size_t i = 0; i < t; ++i) {
        const auto& q = c.connectors[i];
        if (q.size() < 2 || !is_path_in(g, q)) {
            fail("clause (i): connector " + std::to_string(i) + " is not a path in the host");
            continue;
        }
        if (q.front() != c.gadgets[i].b || q.back() != c.gadgets[(i + 1) % t].a)
            fail("clause (i): connector " + std::to_string(i) +
                 " does not run endpoint to endpoint");
        for (std::size_t p = 1; p + 1 < q.size(); ++p)
            if (gadget_union.contains(q[p])) {
                fail("clause (i): connector " + std::to_string(i) + " touches a gadget interior");
                break;
            }
    }

    for (std::size_t i = 0; i < t; ++i)
        if (c.gadgets[i].order() > c.m)
            fail("clause (ii): gadget " + std::to_string(i) + " exceeds the order bound " +
                 std::to_string(c.m));

    if (v.total < c.b)
        fail("clause (iii): total order " + std::to_string(v.total) + " is below b=" +
             std::to_string(c.b));

    if (c.k < 0) fail("clause (iv): negative ladder depth");
    for (std::size_t i = 0; i < t; ++i)
        if (ladder_capacity(c.gadgets[i]) < c.k)
            fail("clause (iv): gadget " + std::to_string(i) +
                 " does not carry the full ladder to depth " + std::to_string(c.k));
    if (v.total - static_cast<long long>(t) * c.k > c.a)
        fail("clause (iv): total - t*k = " +
             std::to_string(v.total - static_cast<long long>(t) * c.k) + " exceeds a=" +
             std::to_string(c.a));

    if (c.a > c.b) fail("params: a exceeds b");

    if (v.failures.empty()) {
        auto seq = cycle_traversal(c);
        if (static_cast<long long>(seq.size()) != v.total || !is_cycle_in(g, seq))
            fail("clause (i): full traversal is not a cycle in the host");
    }
    v.ok = v.failures.empty();
    return v;
}

// Splice per-gadget witnesses with the connectors to hit order n exactly.
// The realizable range is recomputed from the actual ladders: every drop
// budget up to the sum of the capacities can be met greedily because each
// ladder is a contiguous prefix.
inline CycleWitness extract_cycle_of_length(const Graph& g, const GadgetCycle& c, long long n) {
    auto v = verify_gadget_cycle(g, c);
    if (!v.ok)
        throw std::invalid_argument("cycle extraction: arrangement fails verification: " +
                                    v.failures.front());
    long long lo = v.total, hi = v.total;
    for (const auto& j : c.gadgets) lo -= ladder_capacity(j);
    lo = std::max(lo, 3LL);  // no cycle has order below 3
    if (n < lo || n > hi)
        throw std::invalid_argument("cycle extraction: n=" + std::to_string(n) +
                                    " outside the realizable range [" + std::to_string(lo) +
                                    ", " + std::to_string(hi) + "]");

    long long need = v.total - n;
    std::vector<long long> drop(c.gadgets.size(), 0);
    for (std::size_t i = 0; i < c.gadgets.size() && need > 0; ++i) {
        drop[i] = std::min(need, ladder_capacity(c.gadgets[i]));
        need -= drop[i];
    }
    if (need != 0) throw std::logic_error("cycle extraction: greedy drop assignment failed");

    std::vector<int> seq;
    for (std::size_t i = 0; i < c.gadgets.size(); ++i) {
        const auto& w = c.gadgets[i].witnesses.at(static_cast<std::size_t>(drop[i]));
        seq.insert(seq.end(), w.begin(), w.end());
        const auto& q = c.connectors[i];
        if (q.size() > 2) seq.insert(seq.end(), q.begin() + 1, q.end() - 1);
    }
    if (static_cast<long long>(seq.size()) != n || !is_cycle_in(g, seq))
        throw std::logic_error("cycle extraction: spliced sequence is not an n-cycle");
    return CycleWitness{seq};
}

namespace detail {

inline Gadget reversed_gadget(const Gadget& j) {
    Gadget r = j;
    std::swap(r.a, r.b);
    for (auto& w : r.witnesses) std::reverse(w.begin(), w.end());
    return r;
}

// Rebuild arrangement structure over a host cycle: candidates whose full
// witness survives as one contiguous run (either direction) stay gadgets,
// everything else becomes connector material.  Parameters are set sharp:
// a = total - t*k and b = total.
inline GadgetCycle assemble_gadget_cycle(const Graph& g, const std::vector<int>& seq,
                                         const std::vector<Gadget>& candidates, long long m,
                                         long long k) {
    const long long N = static_cast<long long>(seq.size());
    if (N < 3 || !is_cycle_in(g, seq))
        throw std::logic_error("arrangement assembly: host sequence is not a cycle");
    std::vector<long long> pos(g.order(), -1);
    for (long long i = 0; i < N; ++i) pos[seq[i]] = i;

    struct Block {
        long long start;
        Gadget j;
    };
    std::vector<Block> blocks;
    for (const auto& cand : candidates) {
        const auto& w = cand.witnesses.at(0);
        bool present = true;
        for (int x : w)
            if (pos[x] < 0) {
                present = false;
                break;
            }
        if (!present) continue;
        long long p0 = pos[w[0]];
        bool fwd = true, rev = true;
        for (std::size_t i = 1; i < w.size() && (fwd || rev); ++i) {
            long long at = pos[w[i]];
            if (at != (p0 + static_cast<long long>(i)) % N) fwd = false;
            if (at != ((p0 - static_cast<long long>(i)) % N + N) % N) rev = false;
        }
        if (fwd)
            blocks.push_back({p0, cand});
        else if (rev)
            blocks.push_back({((p0 - static_cast<long long>(w.size() - 1)) % N + N) % N,
                              reversed_gadget(cand)});
    }
    if (blocks.empty())
        throw std::runtime_error("arrangement assembly: no gadget survives on the cycle");
    std::sort(blocks.begin(), blocks.end(),
              [](const Block& x, const Block& y) { return x.start < y.start; });

    GadgetCycle c;
    c.m = m;
    c.k = k;
    for (auto& bl : blocks) c.gadgets.push_back(std::move(bl.j));
    const std::size_t t = blocks.size();
    for (std::size_t i = 0; i < t; ++i) {
        long long end_i = (blocks[i].start + c.gadgets[i].order() - 1) % N;
        long long start_next = blocks[(i + 1) % t].start;
        std::vector<int> q;
        for (long long p = end_i;; p = (p + 1) % N) {
            q.push_back(seq[p]);
            if (p == start_next) break;
        }
        c.connectors.push_back(std::move(q));
    }
    c.b = N;
    c.a = N - static_cast<long long>(t) * k;
    auto v = verify_gadget_cycle(g, c);
    if (!v.ok)
        throw std::logic_error("arrangement assembly: verification failed: " + v.failures.front());
    return c;
}

}  // namespace detail

struct JoinedGadgetCycle {
    GadgetCycle cycle;
    long long a_formula = 0;  // a_1 + a_2 + 4m + 2*ell
    long long b_formula = 0;  // (T_1 + T_2)(1 - 2/sqrt(r)), floored
    long long ell = 0;        // longest trimmed path order
    long long distance = 0;   // L1 distance of the chosen endpoint pair
    double threshold = 0;     // pigeonhole bound 2(T_1+T_2)/sqrt(r)
    std::vector<std::string> trace;

    nlohmann::json to_json() const {
        return nlohmann::json{{"cycle", cycle.to_json()}, {"a_formula", a_formula},
                              {"b_formula", b_formula},   {"ell", ell},
                              {"distance", distance},     {"threshold", threshold},
                              {"trace", trace}};
    }
};

// Join two disjoint arrangements through >= 16 disjoint paths.  Two paths with
// endpoint positions within L1 distance 2(T_1+T_2)/sqrt(r) always exist; the
// short position intervals between their endpoints are discarded and the two
// leftover arcs are stitched through the chosen paths.
inline JoinedGadgetCycle join_gadget_cycles(const Graph& g, const GadgetCycle& c1,
                                            const GadgetCycle& c2,
                                            const std::vector<std::vector<int>>& paths) {
    auto v1 = verify_gadget_cycle(g, c1);
    if (!v1.ok)
        throw std::invalid_argument("join: first arrangement fails verification: " +
                                    v1.failures.front());
    auto v2 = verify_gadget_cycle(g, c2);
    if (!v2.ok)
        throw std::invalid_argument("join: second arrangement fails verification: " +
                                    v2.failures.front());
    if (c1.m != c2.m) throw std::invalid_argument("join: arrangements disagree on m");
    if (c1.k != c2.k) throw std::invalid_argument("join: arrangements disagree on k");
    const long long r = static_cast<long long>(paths.size());
    if (r < 16) throw std::invalid_argument("join: need at least 16 connecting paths");

    // position the two traversals, each starting at its smallest endpoint id
    auto rotated = [](const GadgetCycle& c) {
        std::vector<int> seq = cycle_traversal(c);
        int best = seq.front();
        for (const auto& j : c.gadgets) best = std::min({best, j.a, j.b});
        auto it = std::find(seq.begin(), seq.end(), best);
        std::rotate(seq.begin(), it, seq.end());
        return seq;
    };
    std::vector<int> seq1 = rotated(c1), seq2 = rotated(c2);
    const long long T1 = static_cast<long long>(seq1.size());
    const long long T2 = static_cast<long long>(seq2.size());
    std::vector<long long> pos1(g.order(), -1), pos2(g.order(), -1);
    for (long long i = 0; i < T1; ++i) pos1[seq1[i]] = i;
    for (long long i = 0; i < T2; ++i) pos2[seq2[i]] = i;
    for (int x : seq1)
        if (pos2[x] >= 0) throw std::invalid_argument("join: arrangements share vertices");

    // orient every path first-cycle -> second-cycle, then trim it to its last
    // first-cycle vertex and the next second-cycle vertex
    VSet used(g.order());
    bool path_overlap = false;
    std::vector<std::vector<int>> trimmed;
    for (auto p : paths) {
        if (p.size() < 2 || !is_path_in(g, p))
            throw std::invalid_argument("join: connecting path is not a path in the host");
        for (int x : p) {
            if (used.contains(x)) path_overlap = true;
            used.add(x);
        }
        bool fwd = pos1[p.front()] >= 0 && pos2[p.back()] >= 0;
        bool bwd = pos2[p.front()] >= 0 && pos1[p.back()] >= 0;
        if (!fwd && bwd) std::reverse(p.begin(), p.end());
        else if (!fwd)
            throw std::invalid_argument("join: path must run between the two arrangements");
        std::size_t i_star = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (pos1[p[i]] >= 0) i_star = i;
        std::size_t j_star = i_star + 1;
        while (pos2[p[j_star]] < 0) ++j_star;
        trimmed.emplace_back(p.begin() + static_cast<std::ptrdiff_t>(i_star),
                             p.begin() + static_cast<std::ptrdiff_t>(j_star) + 1);
    }
    if (path_overlap) throw std::invalid_argument("join: paths are not pairwise disjoint");

    long long ell = 0;
    for (const auto& p : trimmed) ell = std::max(ell, static_cast<long long>(p.size()));
    const double threshold = 2.0 * static_cast<double>(T1 + T2) / std::sqrt(static_cast<double>(r));

    int bi = -1, bj = -1;
    long long bd = 0;
    for (std::size_t i = 0; i < trimmed.size() && bi < 0; ++i)
        for (std::size_t j = i + 1; j < trimmed.size(); ++j) {
            long long d = std::llabs(pos1[trimmed[i].front()] - pos1[trimmed[j].front()]) +
                          std::llabs(pos2[trimmed[i].back()] - pos2[trimmed[j].back()]);
            if (static_cast<double>(d) <= threshold) {
                bi = static_cast<int>(i);
                bj = static_cast<int>(j);
                bd = d;
                break;
            }
        }
    if (bi < 0) throw std::logic_error("join: no endpoint pair within the pigeonhole bound");

    const long long s_i = pos1[trimmed[bi].front()], s_j = pos1[trimmed[bj].front()];
    const long long t_i = pos2[trimmed[bi].back()], t_j = pos2[trimmed[bj].back()];
    const long long s_lo = std::min(s_i, s_j), s_hi = std::max(s_i, s_j);
    const long long t_lo = std::min(t_i, t_j), t_hi = std::max(t_i, t_j);

    // arcs keep everything outside the open position intervals
    std::vector<int> arc1, arc2;
    for (long long p = s_hi;; p = (p + 1) % T1) {
        arc1.push_back(seq1[p]);
        if (p == s_lo) break;
    }
    for (long long p = t_hi;; p = (p + 1) % T2) {
        arc2.push_back(seq2[p]);
        if (p == t_lo) break;
    }

    const auto& p_lo = (s_i == s_lo) ? trimmed[bi] : trimmed[bj];  // attaches at s_lo
    const auto& p_hi = (s_i == s_lo) ? trimmed[bj] : trimmed[bi];  // attaches at s_hi
    std::vector<int> mid = arc2;
    if (pos2[p_lo.back()] == t_lo) std::reverse(mid.begin(), mid.end());

    std::vector<int> seq_new = arc1;
    seq_new.insert(seq_new.end(), p_lo.begin() + 1, p_lo.end() - 1);
    seq_new.insert(seq_new.end(), mid.begin(), mid.end());
    for (std::size_t q = p_hi.size() - 1; q-- > 1;) seq_new.push_back(p_hi[q]);

    std::vector<Gadget> candidates = c1.gadgets;
    candidates.insert(candidates.end(), c2.gadgets.begin(), c2.gadgets.end());
    JoinedGadgetCycle out;
    out.cycle = detail::assemble_gadget_cycle(g, seq_new, candidates, c1.m, c1.k);
    out.ell = ell;
    out.threshold = threshold;
    out.distance = bd;
    out.a_formula = c1.a + c2.a + 4 * c1.m + 2 * ell;
    out.b_formula = static_cast<long long>(
        std::floor(static_cast<double>(T1 + T2) * (1.0 - 2.0 / std::sqrt(static_cast<double>(r)))));

    const long long total_new = static_cast<long long>(seq_new.size());
    if (out.cycle.a > out.a_formula)
        throw std::logic_error("join: sharp short parameter exceeds the guaranteed formula");
    if (out.cycle.b < out.b_formula)
        throw std::logic_error("join: output order fell below the guaranteed formula");
    if (2 * total_new < T1 + T2)
        throw std::logic_error("join: output lost more than half the material");
    out.trace.push_back("pair (" + std::to_string(bi) + "," + std::to_string(bj) +
                        ") distance=" + std::to_string(bd));
    out.trace.push_back("discarded=" + std::to_string(T1 + T2 - total_new +
                                                      static_cast<long long>(p_lo.size()) +
                                                      static_cast<long long>(p_hi.size()) - 4));
    out.trace.push_back("kept gadgets=" + std::to_string(out.cycle.gadgets.size()) + " of " +
                        std::to_string(candidates.size()));
    return out;
}

// Close a chain of gadget-with-return units into one arrangement.  Consecutive
// units must be linked by >= 12 pairwise disjoint edges between their return
// paths; each matching is thinned to two side-consistent edges, the return-path
// segments between the chosen endpoints are discarded, and the leftover arcs
// plus the chosen edges form a single cycle through every unit's gadget.
inline GadgetCycle path_to_gadget_cycle(const Graph& g,
                                        const std::vector<GadgetWithReturn>& units,
                                        const std::vector<std::vector<std::pair<int, int>>>& matchings,
                                        long long lambda, long long mu, long long m,
                                        const ConstantsProfile& prof = ConstantsProfile::desk()) {
    const std::size_t t = units.size();
    if (t == 0) throw std::invalid_argument("chain closure: need at least one unit");
    if (matchings.size() + 1 != t)
        throw std::invalid_argument("chain closure: need one matching per consecutive unit pair");
    if (lambda < 1 || mu < 1 || m < 1 || mu > lambda)
        throw std::invalid_argument("chain closure: need 1 <= mu <= lambda and m >= 1");
    if (mu * m < 2) throw std::invalid_argument("chain closure: return paths need order >= 2");

    // structural checks per unit, plus global disjointness
    VSet seen(g.order());
    bool overlap = false;
    std::vector<long long> unit_of(g.order(), -1), ret_pos(g.order(), -1);
    for (std::size_t i = 0; i < t; ++i) {
        const auto& u = units[i];
        const std::string tag = "chain closure: unit " + std::to_string(i);
        if (u.gadget.kind != GadgetKind::upto || u.gadget.shortfall != lambda * m)
            throw std::invalid_argument(tag + " is not a full ladder to depth lambda*m");
        if (u.gadget.order() != (lambda + mu) * m)
            throw std::invalid_argument(tag + " has the wrong gadget order");
        if (static_cast<long long>(u.return_path.size()) != mu * m)
            throw std::invalid_argument(tag + " has the wrong return-path order");
        if (u.return_path.front() != u.gadget.a || u.return_path.back() != u.gadget.b)
            throw std::invalid_argument(tag + " return path misses the gadget endpoints");
        if (!is_path_in(g, u.return_path))
            throw std::invalid_argument(tag + " return path is not a path in the host");
        assert_gadget(g, u.gadget);
        VSet rset = VSet::of(g.order(), u.return_path);
        if ((rset & u.gadget.vertices).count() != 2)
            throw std::invalid_argument(tag + " return path re-enters the gadget");
        for (int x = u.gadget.vertices.first(); x >= 0; x = u.gadget.vertices.next(x)) {
            if (seen.contains(x)) overlap = true;
            seen.add(x);
        }
        for (std::size_t p = 0; p < u.return_path.size(); ++p) {
            int x = u.return_path[p];
            unit_of[x] = static_cast<long long>(i);
            ret_pos[x] = static_cast<long long>(p);
            if (p + 1 < u.return_path.size() && p > 0) {
                if (seen.contains(x)) overlap = true;
                seen.add(x);
            }
        }
    }
    if (overlap) throw std::invalid_argument("chain closure: units are not pairwise disjoint");

    struct MEdge {
        int u, v;
        long long pu, pv;
    };
    std::vector<std::vector<MEdge>> cur(matchings.size());
    for (std::size_t j = 0; j < matchings.size(); ++j) {
        if (matchings[j].size() < 12)
            throw std::invalid_argument("chain closure: matching " + std::to_string(j) +
                                        " has fewer than 12 edges");
        VSet ends(g.order());
        for (auto [x, y] : matchings[j]) {
            if (unit_of[x] != static_cast<long long>(j) ||
                unit_of[y] != static_cast<long long>(j + 1))
                throw std::invalid_argument("chain closure: matching " + std::to_string(j) +
                                            " leaves the adjacent return paths");
            if (!g.has_edge(x, y))
                throw std::invalid_argument("chain closure: matching " + std::to_string(j) +
                                            " uses a non-edge");
            if (ends.contains(x) || ends.contains(y))
                throw std::invalid_argument("chain closure: matching " + std::to_string(j) +
                                            " is not vertex-disjoint");
            ends.add(x);
            ends.add(y);
            cur[j].push_back({x, y, ret_pos[x], ret_pos[y]});
        }
    }

    // thin the matchings so that inside every intermediate return path the two
    // incoming endpoints sit strictly on one side of the two outgoing ones
    auto keep_in = [](std::vector<MEdge>& es, long long x, bool below) {
        std::vector<MEdge> kept;
        for (const auto& e : es)
            if (below ? e.pv <= x : e.pv > x) kept.push_back(e);
        es = std::move(kept);
    };
    auto keep_out = [](std::vector<MEdge>& es, long long x, bool below) {
        std::vector<MEdge> kept;
        for (const auto& e : es)
            if (below ? e.pu <= x : e.pu > x) kept.push_back(e);
        es = std::move(kept);
    };
    auto trim_two = [](std::vector<MEdge>& es) {
        std::sort(es.begin(), es.end(),
                  [](const MEdge& x, const MEdge& y) { return x.pu < y.pu; });
        if (es.size() > 2) es = {es.front(), es.back()};
    };
    for (std::size_t unit = 1; unit + 1 < t; ++unit) {
        auto& in = cur[unit - 1];   // its v-endpoints live in this unit's return path
        auto& out = cur[unit];      // its u-endpoints live here too
        const long long need_out = (unit + 2 < t) ? 5 : 2;
        std::vector<long long> xs;
        for (const auto& e : in) xs.push_back(e.pv);
        for (const auto& e : out) xs.push_back(e.pu);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        bool done = false;
        for (long long x : xs) {
            long long ci = 0, co = 0;
            for (const auto& e : in) ci += e.pv <= x;
            for (const auto& e : out) co += e.pu > x;
            if (ci >= 2 && co >= need_out) {
                keep_in(in, x, true);
                keep_out(out, x, false);
                done = true;
                break;
            }
        }
        for (std::size_t xi = 0; !done && xi < xs.size(); ++xi) {
            long long x = xs[xi], ci = 0, co = 0;
            for (const auto& e : out) co += e.pu <= x;
            for (const auto& e : in) ci += e.pv > x;
            if (ci >= 2 && co >= need_out) {
                keep_out(out, x, true);
                keep_in(in, x, false);
                done = true;
            }
        }
        if (!done)
            throw std::runtime_error(
                "chain closure (matchings): no side-consistent split available");
        trim_two(in);
    }
    if (!cur.empty()) trim_two(cur.back());

    // discard the return-path stretch strictly between each chosen pair; an
    // adjacent pair has nothing between it, but the edge joining it still goes
    VSet deleted(g.order());
    std::vector<std::pair<int, int>> severed;
    auto cut = [&](const std::vector<int>& ret, long long lo, long long hi) {
        if (hi == lo + 1) {
            severed.push_back({std::min(ret[lo], ret[hi]), std::max(ret[lo], ret[hi])});
            return;
        }
        for (long long p = lo + 1; p < hi; ++p) deleted.add(ret[p]);
    };
    for (std::size_t j = 0; j < cur.size(); ++j) {
        const auto& e1 = cur[j][0];
        const auto& e2 = cur[j][1];
        cut(units[j].return_path, std::min(e1.pu, e2.pu), std::max(e1.pu, e2.pu));
        cut(units[j + 1].return_path, std::min(e1.pv, e2.pv), std::max(e1.pv, e2.pv));
    }

    // survivors carry exactly two incident edges: unit-loop arcs plus jumps
    std::vector<std::vector<int>> adj(g.order());
    auto link = [&](int x, int y) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    };
    auto is_severed = [&](int x, int y) {
        std::pair<int, int> e{std::min(x, y), std::max(x, y)};
        return std::find(severed.begin(), severed.end(), e) != severed.end();
    };
    long long survivors = 0;
    for (std::size_t i = 0; i < t; ++i) {
        const auto& u = units[i];
        std::vector<int> loop = u.gadget.witnesses.at(0);
        const auto& ret = u.return_path;
        for (std::size_t p = ret.size() - 1; p-- > 1;) loop.push_back(ret[p]);
        for (std::size_t p = 0; p < loop.size(); ++p) {
            int x = loop[p], y = loop[(p + 1) % loop.size()];
            if (!deleted.contains(x) && !deleted.contains(y) && !is_severed(x, y)) link(x, y);
        }
        for (int x : loop)
            if (!deleted.contains(x)) ++survivors;
    }
    for (const auto& pair : cur)
        for (const auto& e : pair) link(e.u, e.v);

    int start = -1;
    for (int x = 0; x < g.order(); ++x)
        if (!adj[x].empty()) {
            if (adj[x].size() != 2)
                throw std::logic_error("chain closure: stitched degree is not two");
            if (start < 0) start = x;
        }
    std::vector<int> seq{start};
    for (int prev = -1, at = start;;) {
        int nxt = (adj[at][0] == prev) ? adj[at][1] : adj[at][0];
        if (nxt == start) break;
        seq.push_back(nxt);
        prev = at;
        at = nxt;
    }
    if (static_cast<long long>(seq.size()) != survivors)
        throw std::logic_error("chain closure: stitched cycle is fragmented");

    long long sigma = static_cast<long long>(t) * ((lambda + 2 * mu) * m - 2);
    long long a_out = ceil_ll(prof.gc_a_frac * static_cast<double>(sigma));
    long long b_out = static_cast<long long>(
        std::floor(prof.gc_b_frac * static_cast<double>(sigma)));
    if (a_out < sigma - static_cast<long long>(t) * lambda * m)
        throw std::invalid_argument(
            "chain closure: profile a-fraction cannot cover this lambda/mu");
    if (b_out > static_cast<long long>(t) * (lambda + mu) * m)
        throw std::invalid_argument(
            "chain closure: profile b-fraction cannot cover this lambda/mu");

    std::vector<Gadget> candidates;
    for (const auto& u : units) candidates.push_back(u.gadget);
    GadgetCycle c = detail::assemble_gadget_cycle(g, seq, candidates, 2 * lambda * m, lambda * m);
    if (c.gadgets.size() != t)
        throw std::logic_error("chain closure: a unit gadget fell off the cycle");
    c.a = a_out;
    c.b = b_out;
    auto v = verify_gadget_cycle(g, c);
    if (!v.ok)
        throw std::logic_error("chain closure: final verification failed: " + v.failures.front());
    return c;
}

}  // namespace ramsey
