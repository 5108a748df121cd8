#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "trifound/error.hpp"
#include "trifound/graph.hpp"

using namespace trifound;
using trifound::testing::brute_force_curve;
using trifound::testing::erdos_renyi;

TEST(Graph, DropsSelfLoopsAndDuplicates) {
    const std::vector<Edge> edges{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}};
    const Graph g = Graph::from_edges(3, edges);
    EXPECT_EQ(g.num_edges(), 2u);
    EXPECT_EQ(g.dropped_edges(), 3u);
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_FALSE(g.has_edge(0, 2));
    EXPECT_EQ(g.degree(1), 2u);
}

TEST(Graph, NeighborListsAreSorted) {
    const Graph g = erdos_renyi(60, 0.2, 3);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        auto nb = g.neighbors(v);
        EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    }
}

TEST(Graph, ParseRelabelsByIncreasingId) {
    std::istringstream in("# comment\n\n100 7\n7 42\n42 100\n");
    const Graph g = parse_edge_list(in);
    ASSERT_EQ(g.num_vertices(), 3u);
    EXPECT_EQ(g.labels(), (std::vector<std::uint64_t>{7, 42, 100}));
    EXPECT_EQ(triangle_count(g), 1u);
}

TEST(Graph, ParseErrorsCarryLineNumbers) {
    std::istringstream bad("1 2\n3 x\n");
    try {
        parse_edge_list(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream extra("1 2 3\n");
    EXPECT_THROW(parse_edge_list(extra), ParseError);
    std::istringstream negative("-1 2\n");
    EXPECT_THROW(parse_edge_list(negative), ParseError);
}

TEST(Graph, WriteThenParseRoundTrips) {
    std::istringstream in("5 9\n9 11\n");
    const Graph g = parse_edge_list(in);
    std::ostringstream out;
    const std::vector<std::string> header{"seed 1"};
    write_edge_list(g, out, header);
    EXPECT_EQ(out.str().rfind("# seed 1\n", 0), 0u);
    std::istringstream back(out.str());
    const Graph h = parse_edge_list(back);
    EXPECT_EQ(g, h);
    EXPECT_EQ(h.labels(), g.labels());
}

TEST(Graph, CompleteGraphCurve) {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 4; ++i)
        for (Vertex j = i + 1; j < 4; ++j) edges.emplace_back(i, j);
    const Graph k4 = Graph::from_edges(4, edges);
    const auto curve = triangle_foundation_curve(k4, 4);
    EXPECT_DOUBLE_EQ(curve.delta_at(2), 0.0);
    EXPECT_DOUBLE_EQ(curve.delta_at(3), 1.0);
    EXPECT_DOUBLE_EQ(curve.triangles_at(100), 4.0);
}

TEST(Graph, StarHasNoTriangles) {
    std::vector<Edge> edges;
    for (Vertex i = 1; i < 10; ++i) edges.emplace_back(0, i);
    const auto curve = triangle_foundation_curve(Graph::from_edges(10, edges), 10);
    for (const auto& p : curve.points) EXPECT_EQ(p.triangles, 0.0);
}

TEST(Graph, CurveMatchesBruteForce) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = erdos_renyi(35, 0.25, seed);
        const auto oracle = brute_force_curve(g);
        for (unsigned threads : {1u, 3u}) {
            const auto curve = triangle_foundation_curve(g, g.num_vertices(), threads);
            for (auto [c, count] : oracle) EXPECT_EQ(curve.triangles_at(c), static_cast<double>(count)) << "c=" << c;
        }
    }
}

TEST(Graph, CurveIsMonotoneAndEndsAtTotal) {
    const Graph g = erdos_renyi(80, 0.1, 11);
    const auto curve = triangle_foundation_curve(g, g.num_vertices());
    for (std::size_t k = 1; k < curve.points.size(); ++k) EXPECT_GE(curve.points[k].delta, curve.points[k - 1].delta);
    EXPECT_EQ(curve.points.back().triangles, static_cast<double>(triangle_count(g)));
}

TEST(Graph, ZeroReferenceSizeIsRejected) {
    EXPECT_THROW(triangle_foundation_curve(erdos_renyi(5, 0.5, 1), 0), Error);
}

TEST(Graph, ResampledStepFills) {
    TriangleFoundationCurve c;
    c.n_ref = 2;
    c.points = {{2, 1, 0.5}, {5, 4, 2.0}};
    const std::vector<std::size_t> grid{1, 2, 3, 5, 9};
    const auto r = c.resampled(grid);
    std::vector<double> got;
    for (const auto& p : r.points) got.push_back(p.delta);
    EXPECT_EQ(got, (std::vector<double>{0.0, 0.5, 0.5, 2.0, 2.0}));
}

TEST(Graph, CsvFormats) {
    TriangleFoundationCurve c;
    c.points = {{3, 1, 0.1}};
    std::ostringstream out;
    write_curve_csv(c, out);
    EXPECT_EQ(out.str(), "c,delta\n3,0.10000000000000001\n");
    const Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
    std::ostringstream deg;
    write_degree_csv(degree_distribution(g), deg);
    EXPECT_EQ(deg.str(), "degree,count\n0,1\n1,2\n");
}

TEST(Graph, TriangleFileExample) {
    std::istringstream in("0 1\n1 2\n2 0");
    const Graph g = parse_edge_list(in);
    EXPECT_EQ(g.num_vertices(), 3u);
    EXPECT_EQ(g.num_edges(), 3u);
    EXPECT_EQ(triangle_count(g), 1u);
    EXPECT_DOUBLE_EQ(triangle_foundation_curve(g, 3).delta_at(2), 1.0 / 3.0);
}

TEST(Graph, DuplicateAndLoopFileExample) {
    std::istringstream in("0 1\n0 1\n1 1\n");
    const Graph g = parse_edge_list(in);
    EXPECT_EQ(g.num_vertices(), 2u);
    EXPECT_EQ(g.num_edges(), 1u);
    EXPECT_EQ(g.dropped_edges(), 2u);
}

TEST(Graph, DegreeDistributionExamples) {
    const Graph k3 = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(degree_distribution(k3).entries, (std::map<std::size_t, double>{{2, 3.0}}));
    std::vector<Edge> star;
    for (Vertex i = 1; i <= 5; ++i) star.emplace_back(0, i);
    EXPECT_EQ(degree_distribution(Graph::from_edges(6, star)).entries, (std::map<std::size_t, double>{{1, 5.0}, {5, 1.0}}));
    const Graph g = erdos_renyi(50, 0.2, 17);
    std::map<std::size_t, double> recount;
    for (Vertex v = 0; v < 50; ++v) {
        std::size_t d = 0;
        for (Vertex w = 0; w < 50; ++w) d += g.has_edge(v, w);
        recount[d] += 1.0;
    }
    EXPECT_EQ(degree_distribution(g).entries, recount);
}

TEST(Graph, TriangleCountExamples) {
    const Graph c5 = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    EXPECT_EQ(triangle_count(c5), 0u);
    const Graph g = erdos_renyi(30, 0.5, 30);
    EXPECT_EQ(static_cast<double>(triangle_count(g)), static_cast<double>(brute_force_curve(g).rbegin()->second));
}
