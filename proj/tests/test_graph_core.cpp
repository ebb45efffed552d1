#include <catch2/catch_amalgamated.hpp>

#include "ramsey/graph.hpp"
#include "ramsey/io.hpp"
#include "ramsey/random.hpp"

using namespace ramsey;

TEST_CASE("bitset basics") {
    VSet s(130);
    s.add(0);
    s.add(63);
    s.add(64);
    s.add(129);
    CHECK(s.count() == 4);
    CHECK(s.contains(63));
    CHECK(!s.contains(62));
    CHECK(s.first() == 0);
    CHECK(s.next(0) == 63);
    CHECK(s.next(64) == 129);
    CHECK(s.next(129) == -1);
    CHECK(s.to_vector() == std::vector<int>{0, 63, 64, 129});

    VSet t(130);
    t.add(63);
    t.add(100);
    CHECK((s & t).to_vector() == std::vector<int>{63});
    CHECK((s - t).count() == 3);
    CHECK(t.subset_of(s | t));
    CHECK(s.intersects(t));
}

TEST_CASE("neighborhood on a path") {
    Graph p3 = Graph::path(3); // 0-1-2
    CHECK(p3.neighborhood(VSet::of(3, std::vector<int>{0, 2})).to_vector() ==
          std::vector<int>{1});
    CHECK(p3.neighborhood(VSet::of(3, std::vector<int>{1})).to_vector() ==
          std::vector<int>{0, 2});
    // N(s) may intersect s
    Graph p4 = Graph::path(4);
    VSet s = VSet::of(4, std::vector<int>{1, 2});
    CHECK(p4.neighborhood(s).to_vector() == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("neighborhood_in is the intersection") {
    std::mt19937_64 seeds(7);
    for (int it = 0; it < 40; ++it) {
        Graph g = random_graph(12, 0.4, seeds());
        std::mt19937_64 rng(seeds());
        VSet s(12), u(12);
        for (int v = 0; v < 12; ++v) {
            if (rng() & 1) s.add(v);
            if (rng() & 2) u.add(v);
        }
        CHECK(g.neighborhood_in(s, u) == (g.neighborhood(s) & u));
    }
}

TEST_CASE("closed neighborhood is monotone under growing s") {
    std::mt19937_64 seeds(11);
    for (int it = 0; it < 40; ++it) {
        Graph g = random_graph(14, 0.3, seeds());
        std::mt19937_64 rng(seeds());
        VSet s(14);
        for (int v = 0; v < 14; ++v)
            if (rng() % 3 == 0) s.add(v);
        VSet t = s;
        for (int v = 0; v < 14; ++v)
            if (rng() % 3 == 0) t.add(v);
        CHECK(g.closed_neighborhood(s).subset_of(g.closed_neighborhood(t)));
        CHECK(g.closed_neighborhood(s).count() <= g.closed_neighborhood(t).count());
    }
}

TEST_CASE("complement is an involution") {
    std::mt19937_64 seeds(3);
    for (int it = 0; it < 30; ++it) {
        Graph g = random_graph(11, 0.5, seeds());
        CHECK(g.complement().complement() == g);
    }
    Graph c4 = Graph::cycle(4);
    Graph cc = c4.complement(); // two disjoint edges: 0-2 and 1-3
    CHECK(cc.edge_count() == 2);
    CHECK(cc.has_edge(0, 2));
    CHECK(cc.has_edge(1, 3));
}

TEST_CASE("induced subgraph relabeling lifts edges faithfully") {
    std::mt19937_64 seeds(5);
    for (int it = 0; it < 30; ++it) {
        Graph g = random_graph(13, 0.4, seeds());
        std::mt19937_64 rng(seeds());
        VSet keep(13);
        for (int v = 0; v < 13; ++v)
            if (rng() & 1) keep.add(v);
        auto [h, map] = g.induced(keep);
        REQUIRE(h.order() == keep.count());
        for (int i = 0; i < h.order(); ++i)
            for (int j = i + 1; j < h.order(); ++j)
                CHECK(h.has_edge(i, j) == g.has_edge(map[i], map[j]));
    }
}

TEST_CASE("edge list round trip") {
    Graph g = random_graph(9, 0.5, 99);
    Graph h = graph_from_edge_list(to_edge_list(g));
    CHECK(g == h);
    CHECK_THROWS(graph_from_edge_list("3\n0 3\n"));
    CHECK_THROWS(graph_from_edge_list("not a graph"));
    CHECK_THROWS(graph_from_edge_list("3\n0\n"));
}

TEST_CASE("graph6 known strings") {
    CHECK(to_graph6(Graph::complete(4)) == "C~");
    CHECK(to_graph6(Graph::cycle(5)) == "Dhc");
    CHECK(to_graph6(Graph(1)) == "@");
    Graph p3 = Graph::path(3);
    // bits x01 x02 x12 = 1 0 1 -> 101000 = 40 -> 'g'
    CHECK(to_graph6(p3) == "Bg");
    CHECK(graph_from_graph6("C~") == Graph::complete(4));
    CHECK(graph_from_graph6("Dhc") == Graph::cycle(5));
}

TEST_CASE("graph6 round trip including a large order") {
    std::mt19937_64 seeds(17);
    for (int n : {0, 1, 2, 5, 20, 63, 70}) {
        Graph g = random_graph(n, 0.4, seeds());
        CHECK(graph_from_graph6(to_graph6(g)) == g);
    }
    CHECK_THROWS(graph_from_graph6("C~trailing"));
    CHECK_THROWS(graph_from_graph6(""));
}

TEST_CASE("coloring file round trip") {
    Graph red = random_graph(10, 0.45, 21);
    TwoColoring c(red);
    TwoColoring d = coloring_from_text(to_coloring_text(c));
    CHECK(d.red() == red);
    CHECK(d.blue() == red.complement());
    CHECK_THROWS(coloring_from_text("blue-of-complete 4\n0 1\n"));
    CHECK_THROWS(coloring_from_text("red-of-complete 4\n0 9\n"));
}

TEST_CASE("red and blue partition the complete graph") {
    std::mt19937_64 seeds(31);
    for (int it = 0; it < 10; ++it) {
        TwoColoring c(random_graph(9, 0.5, seeds()));
        Graph r = c.red(), b = c.blue();
        for (int u = 0; u < 9; ++u)
            for (int v = u + 1; v < 9; ++v) CHECK(r.has_edge(u, v) != b.has_edge(u, v));
    }
}

TEST_CASE("bfs and shortest paths") {
    Graph c6 = Graph::cycle(6);
    auto d = bfs_distances(c6, 0);
    CHECK(d[3] == 3);
    auto p = shortest_path(c6, 0, 3, VSet::full(6));
    REQUIRE(p.size() == 4);
    CHECK(p.front() == 0);
    CHECK(p.back() == 3);
    CHECK(is_path_in(c6, p));
    VSet within = VSet::full(6);
    within.remove(1);
    auto p2 = shortest_path(c6, 0, 3, within);
    CHECK(p2 == std::vector<int>{0, 5, 4, 3});
    CHECK(shortest_path(Graph(4), 0, 3, VSet::full(4)).empty());
}

TEST_CASE("bipartite check") {
    CHECK(is_bipartite(Graph::cycle(6)));
    CHECK(!is_bipartite(Graph::cycle(7)));
    CHECK(is_bipartite(Graph::path(5)));
    CHECK(is_bipartite(Graph(3)));
}
