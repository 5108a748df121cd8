#pragma once

#include <map>
#include <vector>

#include "trifound/graph.hpp"
#include "trifound/rng.hpp"

namespace trifound::testing {

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

// Triangle counts per threshold by checking every vertex triple.
inline std::map<std::size_t, std::uint64_t> brute_force_curve(const Graph& g) {
    const auto n = static_cast<Vertex>(g.num_vertices());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
    std::map<std::size_t, std::uint64_t> by_max;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c)
                if (adj[a][b] && adj[b][c] && adj[a][c])
                    ++by_max[std::max({g.degree(a), g.degree(b), g.degree(c)})];
    std::map<std::size_t, std::uint64_t> curve;
    for (std::size_t c = 0; c <= g.max_degree(); ++c) {
        std::uint64_t total = 0;
        for (auto [d, k] : by_max)
            if (d <= c) total += k;
        curve[c] = total;
    }
    return curve;
}

inline Graph disjoint_triangles(std::size_t count) {
    std::vector<Edge> edges;
    for (Vertex t = 0; t < count; ++t) {
        const Vertex b = 3 * t;
        edges.insert(edges.end(), {{b, b + 1}, {b + 1, b + 2}, {b, b + 2}});
    }
    return Graph::from_edges(3 * count, edges);
}

}  // namespace trifound::testing
