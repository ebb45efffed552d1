#pragma once

#include <cassert>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ramsey/graph.hpp"
#include "ramsey/random.hpp"
#include "ramsey/search.hpp"

namespace ramsey {

// G (Δ,β,m)-expands into W:
//   (i)  |N_W(S)| ≥ Δ|S|        for all S ⊆ V(G) with |S| < m
//   (ii) |N_G(S) ∪ S| ≥ |S|+βm  for all S ⊆ V(G) with m ≤ |S| ≤ |G|/2
struct ExpansionParams {
    long long delta = 0;
    long long beta = 0;
    int m = 1;
};

// H is a (d,m,n)-expander in G:
//   (i)  |N_H(S)| ≥ d|S|      for all S ⊆ V(H) with |S| < m
//   (ii) |N_G(S) ∪ S| ≥ n     for all S ⊆ V(H) with |S| ≥ m
struct DmnParams {
    long long d = 0;
    int m = 1;
    long long n = 1;
};

enum class ExpStatus { VerifiedExhaustively, Falsified, NotFalsified };

struct ExpansionVerdict {
    ExpStatus status = ExpStatus::NotFalsified;
    VSet violating_set;  // meaningful only when Falsified
    std::string clause;  // "i" or "ii" when Falsified
    std::string mode;    // "exact" or "randomized"
    long long budget_used = 0;
    nlohmann::json params;

    bool falsified() const { return status == ExpStatus::Falsified; }
    bool ok() const { return !falsified(); }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (status) {
            case ExpStatus::VerifiedExhaustively: j["status"] = "verified-exhaustively"; break;
            case ExpStatus::Falsified: j["status"] = "falsified"; break;
            case ExpStatus::NotFalsified: j["status"] = "not-falsified"; break;
        }
        if (falsified()) {
            j["violating_set"] = violating_set.to_vector();
            j["clause"] = clause;
        }
        j["params"] = params;
        j["mode"] = mode;
        j["budget_used"] = budget_used;
        return j;
    }
};

struct CheckMode {
    bool exact = true;
    long long budget = 4000;
    uint64_t seed = 0;
    int exact_limit = 20;

    static CheckMode exact_gate(int limit = 20) {
        CheckMode m;
        m.exact = true;
        m.exact_limit = limit;
        return m;
    }
    static CheckMode randomized(long long budget = 4000, uint64_t seed = 0) {
        CheckMode m;
        m.exact = false;
        m.budget = budget;
        m.seed = seed;
        return m;
    }
    // exact when the enumeration universe is small enough, randomized otherwise
    static CheckMode automatic(int universe, int limit = 20, long long budget = 4000,
                               uint64_t seed = 0) {
        return universe <= limit ? exact_gate(limit) : randomized(budget, seed);
    }
};

// Direct single-set recomputation; the source of truth for "violates".
inline std::optional<std::string> expansion_violation(const Graph& g, const VSet& w,
                                                      const ExpansionParams& p, const VSet& s) {
    long long size = s.count();
    if (size == 0) return std::nullopt;
    VSet nb = g.neighborhood(s);
    if (size < p.m) {
        if (static_cast<long long>((nb & w).count()) < p.delta * size) return "i";
    }
    if (size >= p.m && 2 * size <= g.order()) {
        if (static_cast<long long>((nb | s).count()) < size + p.beta * p.m) return "ii";
    }
    return std::nullopt;
}

inline std::optional<std::string> dmn_violation(const Graph& g, const VSet& h,
                                                const VSet& ambient, const DmnParams& p,
                                                const VSet& s) {
    long long size = s.count();
    if (size == 0 || !s.subset_of(h)) return std::nullopt;
    VSet nb = g.neighborhood(s);
    if (size < p.m) {
        if (static_cast<long long>((nb & h).count()) < p.d * size) return "i";
    } else {
        if (static_cast<long long>(((nb | s) & ambient).count()) < p.n) return "ii";
    }
    return std::nullopt;
}

namespace detail {

// Depth-first enumeration of all nonempty subsets of `universe`, maintaining the
// union of g-neighborhoods incrementally.  visit(S, N, size) returns false to abort.
template <class F>
bool enumerate_subsets(const Graph& g, const std::vector<int>& universe, long long& visited,
                       F&& visit) {
    VSet s(g.order());
    std::function<bool(std::size_t, const VSet&, int)> go = [&](std::size_t i, const VSet& nb,
                                                                int size) -> bool {
        if (i == universe.size()) return true;
        if (!go(i + 1, nb, size)) return false; // exclude universe[i]
        int v = universe[i];
        s.add(v);
        VSet nb2 = nb;
        nb2 |= g.neighbors(v);
        ++visited;
        bool keep = visit(s, nb2, size + 1) && go(i + 1, nb2, size + 1);
        s.remove(v);
        return keep;
    };
    return go(0, VSet(g.order()), 0);
}

// Deterministic pseudo-random distinct sample of `count` elements from pool.
inline VSet sample_subset(const std::vector<int>& pool, int count, std::mt19937_64& rng, int n) {
    std::vector<int> idx(pool);
    VSet out(n);
    for (int i = 0; i < count && !idx.empty(); ++i) {
        std::size_t j = static_cast<std::size_t>(rng() % idx.size());
        out.add(idx[j]);
        idx[j] = idx.back();
        idx.pop_back();
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// (Δ,β,m)-expansion checker

inline ExpansionVerdict check_expands_into(const Graph& g, const VSet& w,
                                           const ExpansionParams& p, const CheckMode& mode) {
    if (p.delta < 0 || p.beta < 0 || p.m < 1) throw std::invalid_argument("expansion: bad params");
    ExpansionVerdict v;
    v.params = {{"delta", p.delta}, {"beta", p.beta}, {"m", p.m}};

    auto falsify = [&](const VSet& s) {
        auto cl = expansion_violation(g, w, p, s);
        if (!cl) throw std::logic_error("expansion: falsifying set failed re-verification");
        v.status = ExpStatus::Falsified;
        v.violating_set = s;
        v.clause = *cl;
    };

    if (mode.exact) {
        if (g.order() > mode.exact_limit)
            throw std::invalid_argument("expansion: exact check refused above order " +
                                        std::to_string(mode.exact_limit));
        v.mode = "exact";
        std::vector<int> universe = g.vertices().to_vector();
        detail::enumerate_subsets(g, universe, v.budget_used,
                                  [&](const VSet& s, const VSet& nb, int size) {
                                      if (size < p.m &&
                                          static_cast<long long>((nb & w).count()) <
                                              p.delta * size) {
                                          falsify(s);
                                          return false;
                                      }
                                      if (size >= p.m && 2 * size <= g.order() &&
                                          static_cast<long long>((nb | s).count()) <
                                              size + p.beta * p.m) {
                                          falsify(s);
                                          return false;
                                      }
                                      return true;
                                  });
        if (!v.falsified()) v.status = ExpStatus::VerifiedExhaustively;
        return v;
    }

    v.mode = "randomized";
    std::mt19937_64 rng(mode.seed);
    long long budget = mode.budget;
    int n = g.order();
    std::vector<int> all = g.vertices().to_vector();

    // clause (ii) is outright unsatisfiable when the whole graph cannot hold
    // |S| + beta*m vertices; any m-set then falsifies
    if (2 * p.m <= n && static_cast<long long>(n) < p.m + p.beta * p.m) {
        VSet s(n);
        for (int x : all) {
            s.add(x);
            if (static_cast<long long>(s.count()) == p.m) break;
        }
        falsify(s);
        return v;
    }

    // deterministic prepass: all singletons and pairs for clause (i)
    if (p.m > 1) {
        for (int x : all) {
            if (v.budget_used >= budget) break;
            ++v.budget_used;
            VSet s(n);
            s.add(x);
            if (expansion_violation(g, w, p, s) == std::optional<std::string>("i")) {
                falsify(s);
                return v;
            }
        }
        if (p.m > 2) {
            for (std::size_t a = 0; a < all.size() && v.budget_used < budget; ++a)
                for (std::size_t b = a + 1; b < all.size() && v.budget_used < budget; ++b) {
                    ++v.budget_used;
                    VSet s(n);
                    s.add(all[a]);
                    s.add(all[b]);
                    if (expansion_violation(g, w, p, s) == std::optional<std::string>("i")) {
                        falsify(s);
                        return v;
                    }
                }
        }
    }

    // deterministic prepass: neighborhood balls for clause (ii)
    for (int x : all) {
        if (v.budget_used >= budget) break;
        ++v.budget_used;
        VSet ball(n);
        ball.add(x);
        while (2 * static_cast<long long>(ball.count()) <= n) {
            VSet next = g.neighborhood(ball) | ball;
            long long bs = ball.count();
            if (bs >= p.m && 2 * bs <= n &&
                static_cast<long long>(next.count()) < bs + p.beta * p.m) {
                falsify(ball);
                return v;
            }
            if (next == ball) break;
            ball = next;
        }
    }

    // random sampling with greedy local descent
    while (v.budget_used < budget) {
        ++v.budget_used;
        bool clause_i = p.m > 1 && (rng() & 1);
        if (clause_i) {
            int size = 1 + static_cast<int>(rng() % static_cast<uint64_t>(p.m - 1));
            if (size > n) size = n;
            VSet s = detail::sample_subset(all, size, rng, n);
            // greedily remove the member whose removal most hurts the margin
            while (true) {
                long long margin = static_cast<long long>((g.neighborhood(s) & w).count()) -
                                   p.delta * static_cast<long long>(s.count());
                if (margin < 0) {
                    falsify(s);
                    return v;
                }
                if (s.count() <= 1) break;
                long long best = margin;
                int best_v = -1;
                for (int x = s.first(); x >= 0; x = s.next(x)) {
                    VSet t = s;
                    t.remove(x);
                    long long mg = static_cast<long long>((g.neighborhood(t) & w).count()) -
                                   p.delta * static_cast<long long>(t.count());
                    if (mg < best) {
                        best = mg;
                        best_v = x;
                    }
                }
                if (best_v < 0) break;
                s.remove(best_v);
            }
        } else {
            if (2 * p.m > n) continue;
            int lo = p.m, hi = n / 2;
            int size = lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
            VSet s = detail::sample_subset(all, size, rng, n);
            VSet closure = g.neighborhood(s) | s;
            // grow by vertices that enlarge the closure least
            while (true) {
                long long sz = s.count();
                if (sz >= p.m && 2 * sz <= n &&
                    static_cast<long long>(closure.count()) < sz + p.beta * p.m) {
                    falsify(s);
                    return v;
                }
                if (2 * (sz + 1) > n) break;
                int best_v = -1;
                long long best_gain = 2; // only accept gains ≤ 1 (margin non-increasing)
                for (int x = closure.first(); x >= 0; x = closure.next(x)) {
                    if (s.contains(x)) continue;
                    VSet add = g.neighbors(x);
                    long long gain = static_cast<long long>((add - closure).count()) +
                                     (closure.contains(x) ? 0 : 1);
                    if (gain < best_gain) {
                        best_gain = gain;
                        best_v = x;
                    }
                }
                if (best_v < 0) break;
                s.add(best_v);
                closure |= g.neighbors(best_v);
                closure.add(best_v);
            }
        }
    }
    v.status = ExpStatus::NotFalsified;
    return v;
}

// ---------------------------------------------------------------------------
// (d,m,n)-expander checker; clause (ii) neighborhoods are taken inside `ambient`
// (pass g.vertices() when the ambient graph is g itself).

inline ExpansionVerdict check_dmn_expander(const VSet& h, const Graph& g, const VSet& ambient,
                                           const DmnParams& p, const CheckMode& mode) {
    if (p.d < 0 || p.m < 1 || p.n < 1) throw std::invalid_argument("expander: bad params");
    if (!h.subset_of(ambient)) throw std::invalid_argument("expander: h must lie in ambient");
    ExpansionVerdict v;
    v.params = {{"d", p.d}, {"m", p.m}, {"n", p.n}};

    auto falsify = [&](const VSet& s) {
        auto cl = dmn_violation(g, h, ambient, p, s);
        if (!cl) throw std::logic_error("expander: falsifying set failed re-verification");
        v.status = ExpStatus::Falsified;
        v.violating_set = s;
        v.clause = *cl;
    };

    std::vector<int> hv = h.to_vector();
    if (mode.exact) {
        if (static_cast<int>(hv.size()) > mode.exact_limit)
            throw std::invalid_argument("expander: exact check refused above order " +
                                        std::to_string(mode.exact_limit));
        v.mode = "exact";
        detail::enumerate_subsets(g, hv, v.budget_used,
                                  [&](const VSet& s, const VSet& nb, int size) {
                                      if (size < p.m) {
                                          if (static_cast<long long>((nb & h).count()) <
                                              p.d * size) {
                                              falsify(s);
                                              return false;
                                          }
                                      } else if (static_cast<long long>(
                                                     ((nb | s) & ambient).count()) < p.n) {
                                          falsify(s);
                                          return false;
                                      }
                                      return true;
                                  });
        if (!v.falsified()) v.status = ExpStatus::VerifiedExhaustively;
        return v;
    }

    v.mode = "randomized";
    std::mt19937_64 rng(mode.seed);
    long long budget = mode.budget;
    int n = g.order();

    // prepass: singletons and pairs inside H for clause (i)
    if (p.m > 1) {
        for (std::size_t a = 0; a < hv.size() && v.budget_used < budget; ++a) {
            ++v.budget_used;
            VSet s(n);
            s.add(hv[a]);
            if (dmn_violation(g, h, ambient, p, s)) {
                falsify(s);
                return v;
            }
        }
        if (p.m > 2) {
            for (std::size_t a = 0; a < hv.size() && v.budget_used < budget; ++a)
                for (std::size_t b = a + 1; b < hv.size() && v.budget_used < budget; ++b) {
                    ++v.budget_used;
                    VSet s(n);
                    s.add(hv[a]);
                    s.add(hv[b]);
                    if (dmn_violation(g, h, ambient, p, s)) {
                        falsify(s);
                        return v;
                    }
                }
        }
    }

    // prepass: H-internal balls, checked against both clauses
    for (int x : hv) {
        if (v.budget_used >= budget) break;
        ++v.budget_used;
        VSet ball(n);
        ball.add(x);
        while (true) {
            auto cl = dmn_violation(g, h, ambient, p, ball);
            if (cl) {
                falsify(ball);
                return v;
            }
            VSet next = (g.neighborhood(ball) & h) | ball;
            if (next == ball) break;
            ball = next;
        }
    }

    while (v.budget_used < budget) {
        ++v.budget_used;
        bool clause_i = p.m > 1 && (rng() & 1);
        if (clause_i) {
            int size = 1 + static_cast<int>(rng() % static_cast<uint64_t>(p.m - 1));
            if (size > static_cast<int>(hv.size())) size = static_cast<int>(hv.size());
            VSet s = detail::sample_subset(hv, size, rng, n);
            while (true) {
                long long margin =
                    static_cast<long long>((g.neighborhood(s) & h).count()) -
                    p.d * static_cast<long long>(s.count());
                if (margin < 0) {
                    falsify(s);
                    return v;
                }
                if (s.count() <= 1) break;
                long long best = margin;
                int best_v = -1;
                for (int x = s.first(); x >= 0; x = s.next(x)) {
                    VSet t = s;
                    t.remove(x);
                    long long mg = static_cast<long long>((g.neighborhood(t) & h).count()) -
                                   p.d * static_cast<long long>(t.count());
                    if (mg < best) {
                        best = mg;
                        best_v = x;
                    }
                }
                if (best_v < 0) break;
                s.remove(best_v);
            }
        } else {
            // the ambient closure is monotone in S, so |S| = m candidates dominate;
            // sample one and do swap descent on closure size
            if (p.m > static_cast<int>(hv.size())) continue;
            VSet s = detail::sample_subset(hv, p.m, rng, n);
            auto closure_count = [&](const VSet& t) {
                return static_cast<long long>(((g.neighborhood(t) | t) & ambient).count());
            };
            long long cur = closure_count(s);
            for (int step = 0; step < 4 * p.m; ++step) {
                if (cur < p.n) {
                    falsify(s);
                    return v;
                }
                // remove the member contributing most, re-add the cheapest outsider
                int worst = -1;
                long long worst_cl = -1;
                for (int x = s.first(); x >= 0; x = s.next(x)) {
                    VSet t = s;
                    t.remove(x);
                    long long cl = closure_count(t);
                    if (worst < 0 || cl < worst_cl) {
                        worst = x;
                        worst_cl = cl;
                    }
                }
                if (worst < 0) break;
                VSet t = s;
                t.remove(worst);
                VSet base = (g.neighborhood(t) | t) & ambient;
                int best_v = -1;
                long long best_total = cur;
                for (int x = h.first(); x >= 0; x = h.next(x)) {
                    if (s.contains(x)) continue;
                    VSet add = g.neighbors(x) & ambient;
                    long long total = static_cast<long long>(base.count()) +
                                      static_cast<long long>((add - base).count()) +
                                      (base.contains(x) ? 0 : 1);
                    if (total < best_total) {
                        best_total = total;
                        best_v = x;
                    }
                }
                if (best_v < 0) break;
                t.add(best_v);
                s = t;
                cur = closure_count(s);
            }
        }
    }
    v.status = ExpStatus::NotFalsified;
    return v;
}

inline ExpansionVerdict check_dmn_expander(const VSet& h, const Graph& g, const DmnParams& p,
                                           const CheckMode& mode) {
    return check_dmn_expander(h, g, g.vertices(), p, mode);
}

// ---------------------------------------------------------------------------
// Multipartite-free extraction: find H that (Δ,β,m)-expands into itself, with
// M(k'−1.5)m − m ≤ |H| ≤ M(k'−1.5)m.  The complement-freeness of the input is
// the caller's claim; the expansion of the output is certified, and a k=2
// split refutes the claim outright with a complement biclique.

struct MultipartiteExtraction {
    enum class Status { Extracted, FreenessRefuted, Failed };
    Status status = Status::Failed;
    int k_out = 0;
    VSet h;
    ExpansionVerdict certificate;
    std::optional<std::pair<VSet, VSet>> complement_biclique;
    std::vector<std::string> trace;
    bool extracted() const { return status == Status::Extracted; }
};

namespace detail {

struct MultiExtractCtx {
    const Graph& g;
    int m;
    long long M, delta, beta;
    int exact_limit;
    long long budget;
    uint64_t seed;
    std::vector<std::string>* trace;
};

inline std::string set_brief(const VSet& s) {
    auto v = s.to_vector();
    std::string out = "{";
    for (std::size_t i = 0; i < v.size() && i < 8; ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    if (v.size() > 8) out += ",…";
    return out + "}(" + std::to_string(v.size()) + ")";
}

// Find S inside pool with m ≤ |S| ≤ |pool|/2 and |N∪S| < |S| + (beta+1)m,
// neighborhoods taken inside g[pool].
inline std::optional<VSet> find_bulk_violator(const MultiExtractCtx& c, const VSet& pool,
                                              uint64_t salt) {
    auto [sub, map] = c.g.induced(pool);
    ExpansionParams q{0, c.beta + 1, c.m};
    // delta=0 silences clause (i); only clause (ii) at the strengthened level matters
    CheckMode mode = CheckMode::automatic(sub.order(), c.exact_limit, c.budget, c.seed ^ salt);
    ExpansionVerdict verdict = check_expands_into(sub, sub.vertices(), q, mode);
    if (!verdict.falsified()) return std::nullopt;
    VSet s(c.g.order());
    for (int v : verdict.violating_set.to_vector()) s.add(map[v]);
    return s;
}

// Greedy sparse set: largest found S with |S| ≤ 2m and |N(S)∖S| < (Δ+1)|S|
// inside g[pool].
inline VSet grow_sparse_set(const MultiExtractCtx& c, const VSet& pool) {
    int n = c.g.order();
    VSet s(n);
    bool changed = true;
    while (changed && static_cast<long long>(s.count()) < 2LL * c.m) {
        changed = false;
        for (int v = pool.first(); v >= 0; v = pool.next(v)) {
            if (s.contains(v)) continue;
            VSet t = s;
            t.add(v);
            VSet nb = (c.g.neighborhood(t) & pool) - t;
            if (static_cast<long long>(nb.count()) <
                (c.delta + 1) * static_cast<long long>(t.count())) {
                s = t;
                changed = true;
                if (static_cast<long long>(s.count()) >= 2LL * c.m) break;
            }
        }
    }
    return s;
}

inline bool multi_extract(const MultiExtractCtx& c, VSet pool, int k, int depth,
                          MultipartiteExtraction& out);

// Handle a bulk violator S: split pool into S-side and T-side, recurse.
inline bool split_on(const MultiExtractCtx& c, const VSet& pool, int k, int depth, VSet s,
                     MultipartiteExtraction& out) {
    VSet closure = (c.g.neighborhood(s) & pool) | s;
    VSet t = pool - closure;
    c.trace->push_back("split depth=" + std::to_string(depth) + " S=" + set_brief(s) +
                       " T=" + set_brief(t));
    if (static_cast<long long>(t.count()) < c.m ||
        static_cast<long long>(s.count()) < c.m) {
        // only guaranteed at a full-size trim; on a tight pool the violator may
        // leave too small a remainder to recurse on
        c.trace->push_back("split abandoned: side below m");
        return false;
    }
    if (k == 2) {
        // both sides have ≥ m vertices and no edges between them: the complement
        // of g contains K_{m,m}, refuting the caller's freeness claim
        VSet a(c.g.order()), b(c.g.order());
        for (int v = s.first(); a.count() < c.m; v = s.next(v)) a.add(v);
        for (int v = t.first(); b.count() < c.m; v = t.next(v)) b.add(v);
        for (int x = a.first(); x >= 0; x = a.next(x))
            if (c.g.neighbors(x).intersects(b))
                throw std::logic_error("extract: complement biclique has a cross edge");
        out.status = MultipartiteExtraction::Status::FreenessRefuted;
        out.complement_biclique = {a, b};
        c.trace->push_back("freeness refuted: complement biclique " + set_brief(a) + "×" +
                           set_brief(b));
        return true;
    }
    auto max_scale = [&](const VSet& x) {
        long long count2 = 2 * static_cast<long long>(x.count());
        int best = 1;
        while (c.M * c.m * (2LL * (best + 1) - 3) <= count2) ++best;
        return best;
    };
    int smax = max_scale(s), tmax = max_scale(t);
    if (smax + tmax < k) {
        c.trace->push_back("split abandoned: scales " + std::to_string(smax) + "+" +
                           std::to_string(tmax) + " < k");
        return false;
    }
    int sprime = std::min(smax, k - 1);
    int tprime = k - sprime;
    c.trace->push_back("scales s=" + std::to_string(smax) + " t=" + std::to_string(tmax) +
                       " recurse with s'=" + std::to_string(sprime) +
                       " t'=" + std::to_string(tprime));
    if (sprime >= 2 && multi_extract(c, s, sprime, depth + 1, out)) return true;
    if (tprime >= 2 && multi_extract(c, t, tprime, depth + 1, out)) return true;
    c.trace->push_back("both split branches failed at depth " + std::to_string(depth));
    return false;
}

inline bool multi_extract(const MultiExtractCtx& c, VSet pool, int k, int depth,
                          MultipartiteExtraction& out) {
    if (depth > 64) return false;
    if (k <= 1) {
        c.trace->push_back("k'=1 branch is void (every m-set is a complement K_m^1)");
        return false;
    }
    long long hi2 = c.M * c.m * (2LL * k - 3);
    long long target = hi2 / 2;
    long long lo = target - c.m + (hi2 % 2 == 0 ? 0 : 1); // ≥ ceil(hi2/2) − m
    VSet excluded(c.g.order());
    for (int round = 0; round < c.g.order() + 2; ++round) {
        VSet avail = pool - excluded;
        if (static_cast<long long>(avail.count()) < std::max<long long>(lo, c.m)) {
            c.trace->push_back("pool exhausted at depth " + std::to_string(depth) + " (" +
                               std::to_string(avail.count()) + " < " + std::to_string(lo) + ")");
            return false;
        }
        VSet trimmed(c.g.order());
        for (int v = avail.first(); v >= 0 && static_cast<long long>(trimmed.count()) < target;
             v = avail.next(v))
            trimmed.add(v);
        if (round == 0 && static_cast<long long>(avail.count()) > target)
            c.trace->push_back("trim depth=" + std::to_string(depth) + " to " +
                               std::to_string(trimmed.count()));

        auto bulk = find_bulk_violator(c, trimmed, static_cast<uint64_t>(depth) * 7919 + round);
        if (bulk) return split_on(c, trimmed, k, depth, *bulk, out);

        VSet sparse = grow_sparse_set(c, trimmed);
        if (static_cast<long long>(sparse.count()) >= c.m) {
            // a sparse set of size ≥ m violates the strengthened bulk clause outright
            return split_on(c, trimmed, k, depth, sparse, out);
        }
        VSet candidate = trimmed - sparse;
        if (!sparse.empty())
            c.trace->push_back("removed sparse " + set_brief(sparse));
        auto [sub, map] = c.g.induced(candidate);
        ExpansionParams q{c.delta, c.beta, c.m};
        CheckMode mode = CheckMode::automatic(sub.order(), c.exact_limit, c.budget,
                                              c.seed ^ (static_cast<uint64_t>(depth) << 8 ^ round));
        ExpansionVerdict verdict = check_expands_into(sub, sub.vertices(), q, mode);
        if (!verdict.falsified()) {
            if (static_cast<long long>(candidate.count()) < std::max<long long>(lo, c.m)) {
                c.trace->push_back("certified but below size bracket (" +
                                   std::to_string(candidate.count()) + " < " +
                                   std::to_string(std::max<long long>(lo, c.m)) + ")");
                return false;
            }
            out.status = MultipartiteExtraction::Status::Extracted;
            out.k_out = k;
            out.h = candidate;
            out.certificate = verdict;
            c.trace->push_back("certified k'=" + std::to_string(k) + " |H|=" +
                               std::to_string(candidate.count()) + " (" + verdict.mode + ")");
            return true;
        }
        VSet bad(c.g.order());
        for (int v : verdict.violating_set.to_vector()) bad.add(map[v]);
        c.trace->push_back("certification falsified clause " + verdict.clause + " by " +
                           set_brief(bad));
        if (verdict.clause == "ii" && static_cast<long long>(bad.count()) >= c.m) {
            auto cl = expansion_violation(sub, sub.vertices(), ExpansionParams{0, c.beta + 1, c.m},
                                          verdict.violating_set);
            if (cl == std::optional<std::string>("ii"))
                return split_on(c, candidate, k, depth, bad, out);
        }
        excluded |= sparse;
        excluded |= bad;
    }
    return false;
}

} // namespace detail

inline MultipartiteExtraction extract_multipartite_expander(const Graph& g, int m, int k,
                                                            long long M, long long delta,
                                                            long long beta, int exact_limit = 20,
                                                            long long budget = 4000,
                                                            uint64_t seed = 0) {
    if (m < 1 || k < 1) throw std::invalid_argument("extract: need m ≥ 1, k ≥ 1");
    if (delta < 1) throw std::invalid_argument("extract: need Δ ≥ 1");
    if (4 * (beta + 2) >= M) throw std::invalid_argument("extract: need β+2 < M/4");
    if (3 * delta >= beta) throw std::invalid_argument("extract: need 3Δ < β");
    long long hi2 = M * m * (2LL * k - 3);
    if (static_cast<long long>(g.order()) < m || 2LL * g.order() < hi2)
        throw std::invalid_argument("extract: |g| below max(m, M(k-1.5)m)");

    MultipartiteExtraction out;
    detail::MultiExtractCtx ctx{g, m, M, delta, beta, exact_limit, budget, seed, &out.trace};
    if (!detail::multi_extract(ctx, g.vertices(), k, 0, out) &&
        out.status != MultipartiteExtraction::Status::FreenessRefuted)
        out.status = MultipartiteExtraction::Status::Failed;
    return out;
}

// ---------------------------------------------------------------------------
// Bipartite-free extraction: remove a small B ⊆ U so that g[U∖B] is a
// (d,(d+2)m,n)-expander in g∖B.

struct BipartiteExtraction {
    enum class Status { Extracted, FreenessRefuted, HypothesisFalsified, Failed };
    Status status = Status::Failed;
    VSet removed; // B
    VSet kept;    // H = U∖B
    ExpansionVerdict certificate;
    std::optional<std::pair<VSet, VSet>> complement_biclique; // FreenessRefuted
    std::optional<VSet> absorption_violator;                  // HypothesisFalsified
    std::vector<std::string> trace;
    bool extracted() const { return status == Status::Extracted; }
};

inline BipartiteExtraction extract_bipartite_expander(const Graph& g, const VSet& u, int m,
                                                      long long d, long long n,
                                                      int exact_limit = 20, long long budget = 4000,
                                                      uint64_t seed = 0) {
    if (m < 1 || d < 1) throw std::invalid_argument("extract: need m ≥ 1, d ≥ 1");
    if (n <= (d + 2) * (d + 3) * m) throw std::invalid_argument("extract: need n > (d+2)(d+3)m");
    if (static_cast<long long>(u.count()) < (d + 3) * (d + 3) * m)
        throw std::invalid_argument("extract: need |u| ≥ (d+3)²m");

    BipartiteExtraction out;
    int ng = g.order();
    long long cap = (d + 3) * m;
    VSet b(ng);

    auto u_neighbors_minus = [&](const VSet& x) {
        return (g.neighborhood(x) & u) - x;
    };

    auto grow_b = [&]() {
        bool changed = true;
        while (changed && static_cast<long long>(b.count()) < cap) {
            changed = false;
            for (int v = u.first(); v >= 0; v = u.next(v)) {
                if (b.contains(v)) continue;
                VSet t = b;
                t.add(v);
                if (static_cast<long long>(t.count()) > cap) break;
                if (static_cast<long long>(u_neighbors_minus(t).count()) <
                    (d + 1) * static_cast<long long>(t.count())) {
                    b = t;
                    changed = true;
                }
            }
        }
    };

    for (int round = 0; round < ng + 2; ++round) {
        grow_b();
        if (static_cast<long long>(b.count()) >= m) {
            VSet rest = u - (g.neighborhood(b) | b);
            if (static_cast<long long>(rest.count()) < m)
                throw std::logic_error("extract: sparse B left too small a remainder");
            VSet a(ng), bb(ng);
            for (int v = b.first(); a.count() < m; v = b.next(v))
                a.add(v);
            for (int v = rest.first(); bb.count() < m; v = rest.next(v))
                bb.add(v);
            for (int x = a.first(); x >= 0; x = a.next(x))
                if (g.neighbors(x).intersects(bb))
                    throw std::logic_error("extract: complement biclique has a cross edge");
            out.status = BipartiteExtraction::Status::FreenessRefuted;
            out.complement_biclique = {a, bb};
            out.trace.push_back("sparse B grew to " + std::to_string(b.count()) +
                                " ≥ m: complement biclique found");
            return out;
        }
        VSet h = u - b;
        VSet ambient = g.vertices() - b;
        DmnParams p{d, static_cast<int>((d + 2) * m), n};
        CheckMode mode = CheckMode::automatic(static_cast<int>(h.count()), exact_limit, budget,
                                              seed + round);
        ExpansionVerdict verdict = check_dmn_expander(h, g, ambient, p, mode);
        if (!verdict.falsified()) {
            out.status = BipartiteExtraction::Status::Extracted;
            out.removed = b;
            out.kept = h;
            out.certificate = verdict;
            out.trace.push_back("certified |B|=" + std::to_string(b.count()) + " |H|=" +
                                std::to_string(h.count()) + " (" + verdict.mode + ")");
            return out;
        }
        const VSet& s = verdict.violating_set;
        if (verdict.clause == "i") {
            out.trace.push_back("clause (i) violator of size " + std::to_string(s.count()) +
                                " folded into B");
            b |= s;
            if (static_cast<long long>(b.count()) > cap) {
                out.trace.push_back("B exceeded (d+3)m: giving up");
                out.status = BipartiteExtraction::Status::Failed;
                return out;
            }
            continue;
        }
        // clause (ii): strip U-neighbors of B to get a violator of the caller's
        // absorption hypothesis in the ambient graph g
        VSet stripped = s - g.neighborhood(b);
        VSet closure = g.neighborhood(stripped) | stripped;
        if (static_cast<long long>(stripped.count()) >= m &&
            static_cast<long long>(closure.count()) < n) {
            out.status = BipartiteExtraction::Status::HypothesisFalsified;
            out.absorption_violator = stripped;
            out.trace.push_back("absorption hypothesis falsified by a set of size " +
                                std::to_string(stripped.count()));
            return out;
        }
        out.trace.push_back("clause (ii) violator did not strip to a hypothesis violator");
        out.status = BipartiteExtraction::Status::Failed;
        return out;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Expander path and connectivity routines

// Shortest x–y path inside g[h]; errors if it exceeds 3·log₂m (+slack).
inline std::vector<int> expander_short_path(const Graph& g, const VSet& h, const DmnParams& p,
                                            int x, int y, double slack = 2) {
    if (!h.contains(x) || !h.contains(y)) throw std::invalid_argument("short path: x,y ∉ h");
    auto path = shortest_path(g, x, y, h);
    if (path.empty()) throw std::runtime_error("short path: x and y disconnected in h");
    double bound = 3 * std::log2(std::max(2, p.m)) + slack;
    if (static_cast<double>(path.size()) > bound)
        throw std::runtime_error("short path: shortest order " + std::to_string(path.size()) +
                                 " exceeds bound " + std::to_string(bound) +
                                 " (expansion claims falsified)");
    return path;
}

struct ConnectivityVerdict {
    bool connected = false;
    VSet cut; // a separator of size < d when not connected
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["d_connected"] = connected;
        if (!connected) j["cut"] = cut.to_vector();
        return j;
    }
};

// Exact d-connectivity of g[h] via repeated disjoint-path computations.
inline ConnectivityVerdict expander_connectivity(const Graph& g, const VSet& h, int d) {
    ConnectivityVerdict out;
    out.cut = VSet(g.order());
    auto [sub, map] = g.induced(h);
    int nh = sub.order();
    if (nh <= d) {
        // too few vertices to be d-connected; any n−2 vertices separate (or the
        // graph is complete and below threshold either way)
        out.connected = false;
        return out;
    }
    for (int a = 0; a < nh; ++a)
        for (int bb = a + 1; bb < nh; ++bb) {
            if (sub.has_edge(a, bb)) continue;
            auto r = internally_disjoint_paths(sub, a, bb, d);
            if (!r.found()) {
                for (int v : r.separator) out.cut.add(map[v]);
                out.connected = false;
                return out;
            }
        }
    out.connected = true;
    return out;
}

// x–y path of order between 10m and 12m: long cycle, two disjoint paths onto it,
// longer arc, then chord-shortening with chords of span ≤ 2m.
inline std::vector<int> expander_long_path(const Graph& g, const VSet& h, const DmnParams& p,
                                           int x, int y, const SearchLimits& lim = {}) {
    int m = p.m;
    if (static_cast<long long>(h.count()) < 61LL * m)
        throw std::invalid_argument("long path: need |h| ≥ 61m");
    if (!h.contains(x) || !h.contains(y) || x == y)
        throw std::invalid_argument("long path: need distinct x,y ∈ h");

    VSet pool = h;
    pool.remove(x);
    pool.remove(y);
    auto [sub, map] = g.induced(pool);
    auto cyc = find_cycle_at_least(sub, 20 * m, lim);
    if (!cyc.found())
        throw std::runtime_error("long path: no cycle of order ≥ 20m found (claims falsified)");
    std::vector<int> cycle;
    for (int v : cyc.witness->vertices) cycle.push_back(map[v]);

    auto [hsub, hmap] = g.induced(h);
    std::vector<int> inv(g.order(), -1);
    for (int i = 0; i < hsub.order(); ++i) inv[hmap[i]] = i;
    VSet cset(hsub.order());
    for (int v : cycle) cset.add(inv[v]);
    auto mg = vertex_disjoint_paths(hsub, VSet::of(hsub.order(), std::vector<int>{inv[x], inv[y]}),
                                    cset, 2, lim);
    if (!mg.found())
        throw std::runtime_error("long path: x,y cannot reach the cycle disjointly");
    std::vector<int> px, py;
    for (auto& path : mg.paths) {
        std::vector<int> real;
        for (int v : path) real.push_back(hmap[v]);
        if (real.front() == x) px = real;
        else py = real;
    }
    if (px.empty() || py.empty())
        throw std::runtime_error("long path: disjoint paths missed an endpoint");

    // positions of the two attachment points on the cycle
    int ax = px.back(), ay = py.back();
    int ia = -1, ib = -1;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (cycle[i] == ax) ia = static_cast<int>(i);
        if (cycle[i] == ay) ib = static_cast<int>(i);
    }
    assert(ia >= 0 && ib >= 0 && ia != ib);
    int len = static_cast<int>(cycle.size());
    auto arc = [&](int from, int to, int step) {
        std::vector<int> out_arc;
        for (int i = from;; i = (i + step + len) % len) {
            out_arc.push_back(cycle[i]);
            if (i == to) break;
        }
        return out_arc;
    };
    std::vector<int> arc1 = arc(ia, ib, +1), arc2 = arc(ia, ib, -1);
    std::vector<int> longer = arc1.size() >= arc2.size() ? arc1 : arc2;

    std::vector<int> path(px);
    path.insert(path.end(), longer.begin() + 1, longer.end());
    for (auto it = py.rbegin() + 1; it != py.rend(); ++it) path.push_back(*it);
    if (!is_path_in(g, path) || path.front() != x || path.back() != y)
        throw std::logic_error("long path: spliced walk is not a valid x-y path");

    // shorten with chords of span ≤ 2m while order > 12m
    int guard = g.order() + 2;
    while (static_cast<int>(path.size()) > 12 * m && guard-- > 0) {
        bool shortened = false;
        int t = static_cast<int>(path.size());
        for (int i = 0; i < t - 2 && !shortened; ++i) {
            int max_j = std::min(t - 1, i + 2 * m);
            for (int j = max_j; j >= i + 2; --j) {
                if (static_cast<int>(path.size()) - (j - i - 1) < 10 * m) continue;
                if (g.has_edge(path[i], path[j])) {
                    std::vector<int> next(path.begin(), path.begin() + i + 1);
                    next.insert(next.end(), path.begin() + j, path.end());
                    path = std::move(next);
                    shortened = true;
                    break;
                }
            }
        }
        if (!shortened)
            throw std::runtime_error("long path: no chord of span ≤ 2m while order > 12m "
                                     "(freeness claim falsified)");
    }
    if (!is_path_in(g, path)) throw std::logic_error("long path: shortening broke the path");
    if (static_cast<int>(path.size()) < 10 * m || static_cast<int>(path.size()) > 12 * m)
        throw std::runtime_error("long path: final order " + std::to_string(path.size()) +
                                 " outside [10m,12m]");
    return path;
}

} // namespace ramsey
