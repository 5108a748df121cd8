#include "trifound/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "trifound/error.hpp"
#include "trifound/parallel.hpp"

namespace trifound {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> normalized;
    normalized.reserve(edges.size());
    std::size_t self_loops = 0;
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw Error("edge endpoint out of range");
        if (u == v) {
            ++self_loops;
            continue;
        }
        normalized.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(normalized.begin(), normalized.end());
    const auto last = std::unique(normalized.begin(), normalized.end());
    const std::size_t duplicates = static_cast<std::size_t>(normalized.end() - last);
    normalized.erase(last, normalized.end());

    Graph g;
    g.dropped_ = self_loops + duplicates;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : normalized) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(2 * normalized.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Smaller neighbors first, then larger ones; lexicographic edge order
    // keeps both runs ascending.
    for (auto [u, v] : normalized) g.targets_[cursor[v]++] = u;
    for (auto [u, v] : normalized) g.targets_[cursor[u]++] = v;
    g.labels_.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.labels_[i] = i;
    return g;
}

Graph Graph::with_labels(std::vector<std::uint64_t> labels) const {
    if (labels.size() != num_vertices()) throw Error("label count does not match vertex count");
    Graph g = *this;
    g.labels_ = std::move(labels);
    return g;
}

std::size_t Graph::max_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < num_vertices(); ++v) best = std::max(best, degree(static_cast<Vertex>(v)));
    return best;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    const auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (std::size_t u = 0; u < num_vertices(); ++u)
        for (Vertex v : neighbors(static_cast<Vertex>(u)))
            if (u < v) out.emplace_back(static_cast<Vertex>(u), v);
    return out;
}

namespace {

bool parse_id(std::string_view token, std::uint64_t& out) {
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

Graph parse_edge_list(std::istream& in) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    std::vector<std::uint64_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        const auto start = rest.find_first_not_of(" \t\r");
        if (start == std::string_view::npos || rest[start] == '#') continue;
        std::string_view tokens[3];
        std::size_t count = 0;
        std::size_t pos = start;
        while (pos < rest.size()) {
            const auto end = std::min(rest.find_first_of(" \t\r", pos), rest.size());
            if (count < 3) tokens[count] = rest.substr(pos, end - pos);
            ++count;
            pos = rest.find_first_not_of(" \t\r", end);
            if (pos == std::string_view::npos) break;
        }
        if (count != 2) throw ParseError("expected two vertex ids, found " + std::to_string(count) + " tokens", line_no);
        std::uint64_t u = 0, v = 0;
        if (!parse_id(tokens[0], u)) throw ParseError("malformed vertex id '" + std::string(tokens[0]) + "'", line_no);
        if (!parse_id(tokens[1], v)) throw ParseError("malformed vertex id '" + std::string(tokens[1]) + "'", line_no);
        raw.emplace_back(u, v);
        ids.push_back(u);
        ids.push_back(v);
    }
    if (in.bad()) throw Error("read failure while parsing edge list");

    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto index_of = [&](std::uint64_t id) {
        return static_cast<Vertex>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw) edges.emplace_back(index_of(u), index_of(v));
    return Graph::from_edges(ids.size(), edges).with_labels(std::move(ids));
}

Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open edge list '" + path.string() + "'");
    return parse_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out, std::span<const std::string> header) {
    for (const auto& h : header) out << "# " << h << '\n';
    const auto& labels = g.labels();
    for (auto [u, v] : g.edges()) out << labels[u] << ' ' << labels[v] << '\n';
}

double DegreeDistribution::total() const {
    double sum = 0.0;
    for (const auto& [degree, count] : entries) sum += count;
    return sum;
}

DegreeDistribution degree_distribution(const Graph& g) {
    DegreeDistribution dist;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) dist.entries[g.degree(static_cast<Vertex>(v))] += 1.0;
    return dist;
}

double TriangleFoundationCurve::triangles_at(std::size_t c) const {
    auto it = std::upper_bound(points.begin(), points.end(), c,
                               [](std::size_t value, const CurvePoint& p) { return value < p.c; });
    return it == points.begin() ? 0.0 : std::prev(it)->triangles;
}

double TriangleFoundationCurve::delta_at(std::size_t c) const {
    auto it = std::upper_bound(points.begin(), points.end(), c,
                               [](std::size_t value, const CurvePoint& p) { return value < p.c; });
    return it == points.begin() ? 0.0 : std::prev(it)->delta;
}

std::vector<std::size_t> TriangleFoundationCurve::thresholds() const {
    std::vector<std::size_t> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.c);
    return out;
}

TriangleFoundationCurve TriangleFoundationCurve::resampled(std::span<const std::size_t> grid) const {
    TriangleFoundationCurve out;
    out.n_ref = n_ref;
    out.points.reserve(grid.size());
    for (std::size_t c : grid) out.points.push_back({c, triangles_at(c), delta_at(c)});
    return out;
}

std::map<std::size_t, std::uint64_t> triangles_by_max_degree(const Graph& g, unsigned threads) {
    const std::size_t n = g.num_vertices();
    auto ranks_before = [&](Vertex a, Vertex b) {
        const auto da = g.degree(a), db = g.degree(b);
        return da < db || (da == db && a < b);
    };
    // Orient every edge towards the endpoint of higher (degree, index) rank.
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> forward;
    forward.reserve(g.num_edges());
    for (std::size_t u = 0; u < n; ++u) {
        for (Vertex v : g.neighbors(static_cast<Vertex>(u)))
            if (ranks_before(static_cast<Vertex>(u), v)) forward.push_back(v);
        offsets[u + 1] = forward.size();
    }
    auto out_of = [&](std::size_t u) {
        return std::span<const Vertex>(forward.data() + offsets[u], forward.data() + offsets[u + 1]);
    };

    constexpr std::size_t kChunks = 64;
    const std::size_t chunk_len = std::max<std::size_t>(1, (n + kChunks - 1) / kChunks);
    const std::size_t chunks = n == 0 ? 0 : (n + chunk_len - 1) / chunk_len;
    const std::size_t hist_len = g.max_degree() + 1;
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        auto& hist = partial[chunk];
        hist.assign(hist_len, 0);
        const std::size_t end = std::min(n, (chunk + 1) * chunk_len);
        for (std::size_t u = chunk * chunk_len; u < end; ++u) {
            const auto out_u = out_of(u);
            for (Vertex v : out_u) {
                // Each triangle is found once, from its lowest-ranked vertex u
                // and middle vertex v; w is the top-ranked, highest-degree one.
                const auto out_v = out_of(v);
                auto a = out_u.begin();
                auto b = out_v.begin();
                while (a != out_u.end() && b != out_v.end()) {
                    if (*a < *b) {
                        ++a;
                    } else if (*b < *a) {
                        ++b;
                    } else {
                        ++hist[g.degree(*a)];
                        ++a;
                        ++b;
                    }
                }
            }
        }
    });
    std::map<std::size_t, std::uint64_t> result;
    for (std::size_t deg = 0; deg < hist_len; ++deg) {
        std::uint64_t total = 0;
        for (const auto& hist : partial) total += hist[deg];
        if (total) result[deg] = total;
    }
    return result;
}

std::uint64_t triangle_count(const Graph& g, unsigned threads) {
    std::uint64_t total = 0;
    for (const auto& [deg, count] : triangles_by_max_degree(g, threads)) total += count;
    return total;
}

TriangleFoundationCurve triangle_foundation_curve(const Graph& g, std::size_t n_ref, unsigned threads) {
    if (n_ref == 0) throw Error("n_ref must be at least 1");
    const auto by_degree = triangles_by_max_degree(g, threads);
    const auto degrees = degree_distribution(g);
    TriangleFoundationCurve curve;
    curve.n_ref = n_ref;
    std::uint64_t cumulative = 0;
    auto it = by_degree.begin();
    for (const auto& [c, count] : degrees.entries) {
        while (it != by_degree.end() && it->first <= c) cumulative += (it++)->second;
        const double tri = static_cast<double>(cumulative);
        curve.points.push_back({c, tri, tri / static_cast<double>(n_ref)});
    }
    return curve;
}

void write_curve_csv(const TriangleFoundationCurve& curve, std::ostream& out) {
    out << "c,delta\n";
    char buf[64];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", p.c, p.delta);
        out << buf;
    }
}

void write_degree_csv(const DegreeDistribution& dist, std::ostream& out) {
    out << "degree,count\n";
    char buf[64];
    for (const auto& [degree, count] : dist.entries) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", degree, count);
        out << buf;
    }
}

}  // namespace trifound
