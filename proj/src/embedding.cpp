#include "trifound/embedding.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trifound/eigensolver.hpp"
#include "trifound/error.hpp"

namespace trifound {

Embedding Embedding::plain(RowMatrix vectors) {
    if (!vectors.allFinite()) throw Error("embedding has non-finite entries");
    Embedding e;
    e.kind_ = EmbeddingKind::plain;
    e.vectors_ = std::move(vectors);
    e.weights_ = Eigen::VectorXd::Ones(e.vectors_.cols());
    return e;
}

Embedding Embedding::spectral(RowMatrix eigenvectors, Eigen::VectorXd eigenvalues) {
    if (eigenvectors.cols() != eigenvalues.size()) throw Error("eigenvalue count does not match embedding dimension");
    if (!eigenvectors.allFinite() || !eigenvalues.allFinite()) throw Error("embedding has non-finite entries");
    Embedding e;
    e.kind_ = EmbeddingKind::spectral;
    e.vectors_ = std::move(eigenvectors);
    e.eigenvalues_ = std::move(eigenvalues);
    e.weights_ = e.eigenvalues_;
    return e;
}

double Embedding::pair_score(std::size_t i, std::size_t j) const {
    if (i >= num_vertices() || j >= num_vertices())
        throw std::out_of_range("pair_score: vertex index out of range");
    return weighted_dot(vectors_, weights_, i, j);
}

namespace {

Eigen::SparseMatrix<double, Eigen::RowMajor> sparse_adjacency(const Graph& g) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * g.num_edges());
    for (std::size_t u = 0; u < g.num_vertices(); ++u)
        for (Vertex v : g.neighbors(static_cast<Vertex>(u)))
            triplets.emplace_back(static_cast<int>(u), static_cast<int>(v), 1.0);
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return a;
}

}  // namespace

Embedding spectral_embed(const Graph& g, std::size_t d, const SpectralOptions& options) {
    const std::size_t n = g.num_vertices();
    if (d < 1 || d > n) throw Error("spectral dimension must satisfy 1 <= d <= n (d=" + std::to_string(d) + ", n=" + std::to_string(n) + ")");
    const bool dense = options.solver == EigenSolverKind::dense ||
                       (options.solver == EigenSolverKind::automatic && n <= options.dense_cutoff);
    EigenPairs pairs;
    if (dense) {
        pairs = dense_largest_magnitude(Eigen::MatrixXd(sparse_adjacency(g)), d);
    } else {
        LanczosOptions lanczos;
        lanczos.residual_tol = options.residual_tol;
        lanczos.max_restarts = options.max_restarts;
        lanczos.seed = options.seed;
        pairs = lanczos_largest_magnitude(sparse_adjacency(g), d, lanczos);
    }
    RowMatrix vectors = pairs.vectors;
    for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
        Eigen::Index arg = 0;
        vectors.col(col).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, col) < 0) vectors.col(col) *= -1.0;
    }
    return Embedding::spectral(std::move(vectors), std::move(pairs.values));
}

Eigen::MatrixXd reconstruct(const Embedding& e) {
    const auto& x = e.vectors();
    return x * e.score_weights().asDiagonal() * x.transpose();
}

void save_embedding(const Embedding& e, std::ostream& out) {
    const bool spectral = e.kind() == EmbeddingKind::spectral;
    out << e.num_vertices() << ' ' << e.dim() << ' ' << (spectral ? "spectral" : "plain") << '\n';
    char buf[40];
    if (spectral) {
        out << "lambda:";
        for (Eigen::Index r = 0; r < e.eigenvalues().size(); ++r) {
            std::snprintf(buf, sizeof buf, " %.17g", e.eigenvalues()[r]);
            out << buf;
        }
        out << '\n';
    }
    for (std::size_t i = 0; i < e.num_vertices(); ++i) {
        out << i;
        for (std::size_t r = 0; r < e.dim(); ++r) {
            std::snprintf(buf, sizeof buf, " %.17g", e.vectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)));
            out << buf;
        }
        out << '\n';
    }
}

void save_embedding(const Embedding& e, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write embedding '" + path.string() + "'");
    save_embedding(e, out);
    if (!out) throw Error("write failure for embedding '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = line.find_first_not_of(" \t\r");
    while (pos != std::string_view::npos) {
        const auto end = std::min(line.find_first_of(" \t\r", pos), line.size());
        out.push_back(line.substr(pos, end - pos));
        pos = line.find_first_not_of(" \t\r", end);
    }
    return out;
}

template <class T>
T parse_number(std::string_view token, std::size_t line_no, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(token) + "'", line_no);
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ParseError(std::string("non-finite ") + what, line_no);
    }
    return value;
}

struct RawEmbedding {
    bool spectral = false;
    std::size_t n = 0;
    std::size_t d = 0;
    Eigen::VectorXd eigenvalues;
    std::vector<std::uint64_t> ids;
    RowMatrix rows;
};

RawEmbedding parse_raw(std::istream& in) {
    RawEmbedding raw;
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#') continue;
            return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError("embedding file has no header", 0);
    auto header = split(line);
    if (header.size() < 2 || header.size() > 3) throw ParseError("header must be 'n d [spectral|plain]'", line_no);
    raw.n = parse_number<std::size_t>(header[0], line_no, "vertex count");
    raw.d = parse_number<std::size_t>(header[1], line_no, "dimension");
    if (raw.d == 0) throw ParseError("dimension must be positive", line_no);
    if (header.size() == 3) {
        if (header[2] == "spectral") raw.spectral = true;
        else if (header[2] != "plain") throw ParseError("unknown embedding kind '" + std::string(header[2]) + "'", line_no);
    }
    if (raw.spectral) {
        if (!next_line()) throw ParseError("missing 'lambda:' line", line_no);
        auto tokens = split(line);
        if (tokens.empty() || tokens[0] != "lambda:") throw ParseError("expected 'lambda:' line", line_no);
        if (tokens.size() - 1 != raw.d)
            throw ParseError("dimension mismatch: header says d=" + std::to_string(raw.d) + ", lambda line has " +
                                 std::to_string(tokens.size() - 1) + " values",
                             line_no);
        raw.eigenvalues.resize(static_cast<Eigen::Index>(raw.d));
        for (std::size_t r = 0; r < raw.d; ++r)
            raw.eigenvalues[static_cast<Eigen::Index>(r)] = parse_number<double>(tokens[r + 1], line_no, "eigenvalue");
    }
    raw.rows.resize(static_cast<Eigen::Index>(raw.n), static_cast<Eigen::Index>(raw.d));
    raw.ids.reserve(raw.n);
    while (next_line()) {
        auto tokens = split(line);
        if (tokens.size() != raw.d + 1)
            throw ParseError("dimension mismatch: header says d=" + std::to_string(raw.d) + ", row has " +
                                 std::to_string(tokens.size() - 1) + " values",
                             line_no);
        if (raw.ids.size() == raw.n) throw ParseError("more rows than the header's n=" + std::to_string(raw.n), line_no);
        const auto row = static_cast<Eigen::Index>(raw.ids.size());
        raw.ids.push_back(parse_number<std::uint64_t>(tokens[0], line_no, "vertex id"));
        for (std::size_t r = 0; r < raw.d; ++r)
            raw.rows(row, static_cast<Eigen::Index>(r)) = parse_number<double>(tokens[r + 1], line_no, "coordinate");
    }
    if (in.bad()) throw Error("read failure while parsing embedding");
    return raw;
}

// Places each raw row at index_of(id), rejecting duplicates and gaps.
template <class IndexOf>
Embedding assemble(RawEmbedding raw, IndexOf index_of) {
    RowMatrix vectors(static_cast<Eigen::Index>(raw.n), static_cast<Eigen::Index>(raw.d));
    std::vector<bool> seen(raw.n, false);
    for (std::size_t row = 0; row < raw.ids.size(); ++row) {
        const std::size_t idx = index_of(raw.ids[row]);
        if (seen[idx]) throw ParseError("duplicate vertex id " + std::to_string(raw.ids[row]), 0);
        seen[idx] = true;
        vectors.row(static_cast<Eigen::Index>(idx)) = raw.rows.row(static_cast<Eigen::Index>(row));
    }
    for (std::size_t i = 0; i < raw.n; ++i)
        if (!seen[i]) throw ParseError("missing vertex id for index " + std::to_string(i), 0);
    if (raw.spectral) return Embedding::spectral(std::move(vectors), std::move(raw.eigenvalues));
    return Embedding::plain(std::move(vectors));
}

}  // namespace

Embedding parse_embedding(std::istream& in) {
    RawEmbedding raw = parse_raw(in);
    const std::size_t n = raw.n;
    return assemble(std::move(raw), [n](std::uint64_t id) -> std::size_t {
        if (id >= n) throw ParseError("vertex id " + std::to_string(id) + " outside [0, " + std::to_string(n) + ")", 0);
        return static_cast<std::size_t>(id);
    });
}

Embedding load_embedding(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embedding '" + path.string() + "'");
    return parse_embedding(in);
}

Embedding load_embedding(const std::filesystem::path& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embedding '" + path.string() + "'");
    RawEmbedding raw = parse_raw(in);
    if (raw.n != g.num_vertices())
        throw Error("embedding has " + std::to_string(raw.n) + " vertices but the graph has " + std::to_string(g.num_vertices()));
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < g.labels().size(); ++i) index.emplace(g.labels()[i], i);
    return assemble(std::move(raw), [&](std::uint64_t id) -> std::size_t {
        auto it = index.find(id);
        if (it == index.end()) throw ParseError("vertex id " + std::to_string(id) + " is not a graph vertex", 0);
        return it->second;
    });
}

}  // namespace trifound
