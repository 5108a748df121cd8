#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trifound {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Immutable undirected simple graph. Each vertex keeps a sorted neighbor list;
// an edge is stored once per endpoint.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list over [0, n). Self-loops and duplicates are
    // dropped; the number dropped is available from dropped_edges().
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const { return targets_.size() / 2; }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::size_t max_degree() const;
    bool has_edge(Vertex u, Vertex v) const;

    // Edges (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    // Original identifier of each vertex; identity unless the graph was loaded
    // from a file with non-contiguous ids.
    const std::vector<std::uint64_t>& labels() const { return labels_; }
    std::size_t dropped_edges() const { return dropped_; }

    Graph with_labels(std::vector<std::uint64_t> labels) const;

    bool operator==(const Graph& other) const {
        return offsets_ == other.offsets_ && targets_ == other.targets_;
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> targets_;
    std::vector<std::uint64_t> labels_;
    std::size_t dropped_ = 0;
};

// Reads "u v" lines ('#' starts a comment line). Vertex ids are relabeled to
// 0..n-1 in increasing order of the original id.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(std::istream& in);

// Writes one "u v" line per edge using the graph's labels; header lines are
// emitted as '#' comments first.
void write_edge_list(const Graph& g, std::ostream& out, std::span<const std::string> header = {});

// degree -> number of vertices (observed) or real-valued count (models).
struct DegreeDistribution {
    std::map<std::size_t, double> entries;

    double total() const;
};

DegreeDistribution degree_distribution(const Graph& g);

struct CurvePoint {
    std::size_t c = 0;
    // Triangles whose three endpoints all have degree <= c. Kept as a real so
    // the same type carries pointwise maxima and means over samples.
    double triangles = 0.0;
    double delta = 0.0;
};

// Step function c -> delta: triangles among vertices of degree <= c, divided
// by n_ref. Points are sorted by c.
struct TriangleFoundationCurve {
    std::vector<CurvePoint> points;
    std::size_t n_ref = 1;

    // Value at an arbitrary threshold (0 below the first point).
    double delta_at(std::size_t c) const;
    double triangles_at(std::size_t c) const;
    std::vector<std::size_t> thresholds() const;
    // Same step function evaluated on another grid.
    TriangleFoundationCurve resampled(std::span<const std::size_t> grid) const;
};

std::uint64_t triangle_count(const Graph& g, unsigned threads = 1);

// Histogram of triangles keyed by the largest endpoint degree.
std::map<std::size_t, std::uint64_t> triangles_by_max_degree(const Graph& g, unsigned threads = 1);

TriangleFoundationCurve triangle_foundation_curve(const Graph& g, std::size_t n_ref, unsigned threads = 1);

// CSV writers: "c,delta" with 17 significant digits, "degree,count".
void write_curve_csv(const TriangleFoundationCurve& curve, std::ostream& out);
void write_degree_csv(const DegreeDistribution& dist, std::ostream& out);

}  // namespace trifound
