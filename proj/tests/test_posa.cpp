#include "catch_amalgamated.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "ramsey/posa.hpp"
#include "ramsey/random.hpp"
#include "ramsey/search.hpp"

using namespace ramsey;

namespace {

Graph path_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph cycle_graph(int n) {
    Graph g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}

Graph complete_graph(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

// center 0, leaves 1..n
Graph star_graph(int leaves) {
    Graph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}

Graph petersen() {
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

std::vector<int> iota_path(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

bool connected(const Graph& g) {
    auto d = bfs_distances(g, 0, g.vertices());
    for (int v = 0; v < g.order(); ++v)
        if (d[v] < 0) return false;
    return true;
}

// Reference closure over the full derivation tree: BFS on distinct path
// sequences, no memoization.  Exponential, so only for tiny instances.
std::set<int> full_tree_endings(const Graph& g, const std::vector<int>& p) {
    std::set<std::vector<int>> seen{p};
    std::vector<std::vector<int>> queue{p};
    std::set<int> ends{p.back()};
    const int t = static_cast<int>(p.size());
    while (!queue.empty()) {
        std::vector<int> cur = queue.back();
        queue.pop_back();
        std::vector<int> pos(g.order(), -1);
        for (int i = 0; i < t; ++i) pos[cur[i]] = i;
        VSet nb = g.neighbors(cur.back());
        for (int u = nb.first(); u >= 0; u = nb.next(u)) {
            int j = pos[u];
            if (j < 0 || j > t - 3) continue;
            std::vector<int> q(cur.begin(), cur.begin() + j + 1);
            q.insert(q.end(), cur.rbegin(), cur.rend() - (j + 1));
            if (seen.insert(q).second) {
                ends.insert(q.back());
                queue.push_back(q);
            }
        }
    }
    return ends;
}

std::set<int> as_set(const VSet& s) {
    auto v = s.to_vector();
    return std::set<int>(v.begin(), v.end());
}

// All simple paths from v by DFS; returns the maximum order.  Tiny inputs only.
int brute_longest_from(const Graph& g, int v) {
    std::vector<int> stack{v};
    VSet used(g.order());
    used.add(v);
    int best = 1;
    std::function<void()> go = [&]() {
        best = std::max(best, static_cast<int>(stack.size()));
        VSet nb = g.neighbors(stack.back()) - used;
        for (int w = nb.first(); w >= 0; w = nb.next(w)) {
            stack.push_back(w);
            used.add(w);
            go();
            stack.pop_back();
            used.remove(w);
        }
    };
    go();
    return best;
}

} // namespace

TEST_CASE("rotation closure on the named small graphs") {
    SECTION("a bare path only ends where it already ends") {
        Graph g = path_graph(5);
        auto st = ending_vertices(g, iota_path(5));
        REQUIRE(st.ending_vertices.to_vector() == std::vector<int>{4});
        REQUIRE(st.derived_frontier.size() == 1);
        REQUIRE(st.derived_frontier[0] == iota_path(5));
    }
    SECTION("the pentagon alternates between two endpoints") {
        Graph g = cycle_graph(5);
        auto st = ending_vertices(g, iota_path(5));
        REQUIRE(st.ending_vertices.to_vector() == std::vector<int>{1, 4});
        REQUIRE(st.derived_frontier.size() == 2);
        REQUIRE(st.path_ending_at(1) == std::vector<int>{0, 4, 3, 2, 1});
    }
    SECTION("a complete graph reaches every non-anchor vertex") {
        Graph g = complete_graph(4);
        auto st = ending_vertices(g, iota_path(4));
        REQUIRE(st.ending_vertices.to_vector() == std::vector<int>{1, 2, 3});
    }
}

TEST_CASE("rotation closure rejects invalid paths") {
    Graph g = path_graph(5);
    REQUIRE_THROWS_AS(ending_vertices(g, {0, 2, 4}), std::invalid_argument);
    REQUIRE_THROWS_AS(ending_vertices(g, {0, 1, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(ending_vertices(g, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(ending_vertices(g, {3, 4, 5}), std::invalid_argument);
}

TEST_CASE("frontier entries are genuine derived paths") {
    for (int seed = 0; seed < 30; ++seed) {
        Graph g = random_graph(5 + seed % 5, 0.5, 40 + seed);
        if (!connected(g)) continue;
        std::vector<int> p = longest_path_from(g, seed % g.order());
        auto st = ending_vertices(g, p);
        std::vector<int> base_sorted = p;
        std::sort(base_sorted.begin(), base_sorted.end());
        std::set<int> backs;
        for (const auto& q : st.derived_frontier) {
            REQUIRE(is_path_in(g, q));
            REQUIRE(q.front() == p.front());
            std::vector<int> qs = q;
            std::sort(qs.begin(), qs.end());
            REQUIRE(qs == base_sorted);
            backs.insert(q.back());
        }
        REQUIRE(backs == as_set(st.ending_vertices));
        REQUIRE(st.derived_frontier.size() == backs.size());
    }
}

TEST_CASE("one stored path per endpoint is a genuine restriction") {
    // On this 8-vertex graph the full derivation tree also ends at vertex 6,
    // which the one-path-per-endpoint frontier never reaches.  Every reported
    // endpoint still carries a valid derived path, and the closure is what
    // the neighbourhood bound below is proved for.
    Graph g(8);
    g.add_edge(0, 5);
    g.add_edge(0, 7);
    g.add_edge(1, 3);
    g.add_edge(1, 4);
    g.add_edge(1, 5);
    g.add_edge(2, 4);
    g.add_edge(2, 5);
    g.add_edge(2, 7);
    g.add_edge(3, 4);
    g.add_edge(3, 6);
    g.add_edge(6, 7);
    std::vector<int> p{0, 5, 2, 4, 1, 3, 6, 7};
    REQUIRE(is_path_in(g, p));
    auto st = ending_vertices(g, p);
    REQUIRE(as_set(st.ending_vertices) == std::set<int>{1, 2, 3, 4, 5, 7});
    REQUIRE(full_tree_endings(g, p) == std::set<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("memoized closure is always a subset of the full derivation tree") {
    for (int seed = 0; seed < 60; ++seed) {
        Graph g = random_graph(4 + seed % 5, 0.45 + 0.1 * (seed % 3), 500 + seed);
        if (!connected(g)) continue;
        std::vector<int> p = longest_path_from(g, 0);
        if (p.size() < 3) continue;
        auto st = ending_vertices(g, p);
        auto full = full_tree_endings(g, p);
        for (int e : st.ending_vertices.to_vector()) REQUIRE(full.count(e) == 1);
    }
}

TEST_CASE("the neighbourhood bound on the named graphs") {
    SECTION("pentagon") {
        Graph g = cycle_graph(5);
        auto v = check_posa_bound(g, iota_path(5));
        REQUIRE(v.holds);
        REQUIRE(v.ending.to_vector() == std::vector<int>{1, 4});
        REQUIRE(v.neighborhood.to_vector() == std::vector<int>{0, 2, 3});
    }
    SECTION("complete graph") {
        Graph g = complete_graph(6);
        auto v = check_posa_bound(g, iota_path(6));
        REQUIRE(v.holds);
        REQUIRE(v.ending.count() == 5);
        REQUIRE(v.neighborhood.count() == 6);
    }
    SECTION("a non-maximal path in a star fails the bound and says so") {
        Graph g = star_graph(4);
        auto v = check_posa_bound(g, {1, 0});
        REQUIRE_FALSE(v.holds);
        REQUIRE(v.ending.to_vector() == std::vector<int>{0});
        REQUIRE(v.neighborhood.count() == 4);
    }
}

TEST_CASE("longest path search on the named graphs") {
    REQUIRE(longest_path_from(complete_graph(7), 3).size() == 7);
    REQUIRE(longest_path_from(star_graph(5), 0).size() == 2);
    REQUIRE(longest_path_from(star_graph(5), 2).size() == 3);
    std::vector<int> pp = longest_path_from(petersen(), 0);
    REQUIRE(is_path_in(petersen(), pp));
    REQUIRE(pp.size() >= 9);
    REQUIRE(exhaustive_longest_path_from(petersen(), 0).size() == 10);
}

TEST_CASE("rotation-extension stops only when no endpoint extends") {
    for (int seed = 0; seed < 25; ++seed) {
        Graph g = random_graph(6 + seed % 7, 0.4, 700 + seed);
        if (!connected(g)) continue;
        int v = seed % g.order();
        std::vector<int> p = longest_path_from(g, v);
        REQUIRE(is_path_in(g, p));
        REQUIRE(p.front() == v);
        VSet on_path = VSet::of(g.order(), p);
        auto st = ending_vertices(g, p);
        for (const auto& q : st.derived_frontier)
            REQUIRE((g.neighbors(q.back()) - on_path).count() == 0);
    }
}

TEST_CASE("exhaustive longest path agrees with plain enumeration") {
    for (int seed = 0; seed < 40; ++seed) {
        Graph g = random_graph(4 + seed % 4, 0.5, 900 + seed);
        int v = seed % g.order();
        std::vector<int> p = exhaustive_longest_path_from(g, v);
        REQUIRE(is_path_in(g, p));
        REQUIRE(p.front() == v);
        REQUIRE(static_cast<int>(p.size()) == brute_longest_from(g, v));
    }
    REQUIRE_THROWS_AS(exhaustive_longest_path_from(complete_graph(15), 0),
                      std::invalid_argument);
}

TEST_CASE("certified maximum paths satisfy the neighbourhood bound") {
    int checked = 0;
    for (int seed = 0; seed < 120; ++seed) {
        int order = 4 + seed % 7; // 4..10
        Graph g = random_graph(order, 0.35 + 0.15 * (seed % 3), 1300 + seed);
        if (!connected(g)) continue;
        for (int v : {0, order / 2}) {
            std::vector<int> best = exhaustive_longest_path_from(g, v);
            auto verdict = check_posa_bound(g, best);
            REQUIRE(verdict.holds);
            REQUIRE(longest_path_from(g, v).size() <= best.size());
            ++checked;
        }
    }
    REQUIRE(checked >= 100);
}

TEST_CASE("rotation closure and longest path are deterministic") {
    Graph g = random_graph(12, 0.5, 77);
    std::vector<int> p1 = longest_path_from(g, 1);
    std::vector<int> p2 = longest_path_from(g, 1);
    REQUIRE(p1 == p2);
    REQUIRE(ending_vertices(g, p1).to_json().dump() == ending_vertices(g, p2).to_json().dump());
}

TEST_CASE("exact-length connection on a dense host") {
    Graph g = random_graph(2600, 0.75, 901);
    const int m = 4;
    std::vector<int> walk = longest_path_from(g, 0);
    REQUIRE(walk.size() >= 40);
    std::vector<int> seed_path(walk.begin(), walk.begin() + 40);
    int x = seed_path.front(), y = seed_path.back();
    const long long n = 1500;

    ConnectResult res = connect_exact_length(g, x, y, seed_path, m, n);
    REQUIRE(res.found());
    REQUIRE(static_cast<long long>(res.path->size()) == n);
    REQUIRE(res.path->front() == x);
    REQUIRE(res.path->back() == y);
    REQUIRE(is_path_in(g, *res.path));

    SECTION("the run is deterministic") {
        ConnectResult again = connect_exact_length(g, x, y, seed_path, m, n);
        REQUIRE(again.found());
        REQUIRE(*again.path == *res.path);
    }
}

TEST_CASE("exact-length connection refuses an impossible target") {
    Graph g = random_graph(2600, 0.75, 902);
    std::vector<int> walk = longest_path_from(g, 0);
    std::vector<int> seed_path(walk.begin(), walk.begin() + 40);
    try {
        connect_exact_length(g, seed_path.front(), seed_path.back(), seed_path, 4, 1'000'000);
        FAIL("a million-vertex path cannot exist in a 2600-vertex host");
    } catch (const std::runtime_error& e) {
        REQUIRE(std::string(e.what()).find("connect (") == 0);
    }
}

TEST_CASE("exact-length connection surfaces a planted complement biclique") {
    const int m = 4;
    const int span = 44; // 11m seed vertices, kept chord-free
    Graph noisy = random_graph(300, 0.6, 903);
    Graph g(300);
    for (int u = 0; u < 300; ++u) {
        VSet nb = noisy.neighbors(u);
        for (int v = nb.next(u); v >= 0; v = nb.next(v)) {
            if (u < span && v < span) continue; // seed stays an induced path
            g.add_edge(u, v);
        }
    }
    for (int i = 0; i + 1 < span; ++i) g.add_edge(i, i + 1);
    std::vector<int> seed_path = iota_path(span);
    REQUIRE(is_path_in(g, seed_path));

    ConnectResult res = connect_exact_length(g, 0, span - 1, seed_path, m, 200);
    REQUIRE_FALSE(res.found());
    REQUIRE(res.counter.has_value());
    REQUIRE(res.counter->left.size() == m);
    REQUIRE(res.counter->right.size() == m);
    for (int u : res.counter->left)
        for (int v : res.counter->right) REQUIRE_FALSE(g.has_edge(u, v));

    MultipartiteWitness w;
    w.parts = {res.counter->left, res.counter->right};
    REQUIRE(verify_multipartite(g.complement(), w, {m, m}));
}

TEST_CASE("exact-length connection validates its inputs") {
    Graph g = random_graph(300, 0.7, 904);
    std::vector<int> walk = longest_path_from(g, 0);
    REQUIRE(walk.size() >= 40);
    std::vector<int> seed_path(walk.begin(), walk.begin() + 40);
    int x = seed_path.front(), y = seed_path.back();

    REQUIRE_THROWS_AS(connect_exact_length(g, y, x, seed_path, 4, 200), std::invalid_argument);
    std::vector<int> stub(seed_path.begin(), seed_path.begin() + 20);
    REQUIRE_THROWS_AS(connect_exact_length(g, x, stub.back(), stub, 4, 200),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(connect_exact_length(g, x, y, seed_path, 4, 100), std::invalid_argument);
    std::vector<int> broken = seed_path;
    std::swap(broken[5], broken[6]);
    if (!is_path_in(g, broken))
        REQUIRE_THROWS_AS(connect_exact_length(g, x, y, broken, 4, 200), std::invalid_argument);
}
