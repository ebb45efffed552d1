#pragma once

#include <cstdint>
#include <random>

#include "ramsey/graph.hpp"

namespace ramsey {

// Deterministic seeded generators.  Edge order is fixed (u<v lexicographic)
// so a given seed always produces the same graph on every platform.

inline Graph random_graph(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) g.add_edge(u, v);
    return g;
}

// G(n,p) conditioned on connectivity by wiring each non-first component to
// vertex 0; keeps determinism and density while guaranteeing one component.
inline Graph random_connected_graph(int n, double p, std::uint64_t seed) {
    Graph g = random_graph(n, p, seed);
    auto comps = components(g, VSet::full(n));
    for (std::size_t i = 1; i < comps.size(); ++i) g.add_edge(0, comps[i].first());
    return g;
}

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
}

} // namespace ramsey
