#include "trifound/theory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "trifound/edge_models.hpp"
#include "trifound/error.hpp"
#include "trifound/pairs.hpp"
#include "trifound/parallel.hpp"
#include "trifound/sampler.hpp"

namespace trifound {

double rank_lemma_bound(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw Error("rank lemma needs a square matrix");
    if (!m.allFinite()) throw Error("rank lemma needs finite entries");
    const double sq = m.squaredNorm();
    if (sq == 0.0) throw Error("rank lemma bound is undefined for the zero matrix");
    const double trace = m.trace();
    return trace * trace / sq;
}

std::size_t numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.size() == 0) return 0;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    return static_cast<std::size_t>((sv.array() > rel_tol * sv[0]).count());
}

double packing_max_dot(const RowMatrix& u) {
    if (u.rows() < 2) throw Error("packing_max_dot needs at least two vectors");
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        if (std::abs(u.row(i).norm() - 1.0) > 1e-9) throw Error("packing_max_dot needs unit vectors (row " + std::to_string(i) + ")");
    const Eigen::MatrixXd gram = u * u.transpose();
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            if (i != j) best = std::max(best, gram(i, j));
    return best;
}

std::vector<Vertex> greedy_independent_set(const Graph& g) {
    std::vector<bool> removed(g.num_vertices(), false);
    std::vector<Vertex> chosen;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        if (removed[v]) continue;
        chosen.push_back(static_cast<Vertex>(v));
        removed[v] = true;
        for (Vertex w : g.neighbors(static_cast<Vertex>(v))) removed[w] = true;
    }
    return chosen;
}

DotMass dot_mass_split(const RowMatrix& vectors) {
    const Eigen::MatrixXd gram = vectors * vectors.transpose();
    CompensatedSum negative, positive;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j) {
            const double v = gram(i, j);
            if (v < 0) negative.add(-v);
            else if (v > 0) positive.add(v);
        }
    return {negative.value(), positive.value()};
}

double length_lower_bound(double c, double delta) {
    if (!(c > 0) || !(delta > 0)) throw Error("length bound needs c > 0 and delta > 0");
    return std::sqrt(delta) / c;
}

double core_length_lower_bound(double c, double delta) { return length_lower_bound(c, delta) / 4.0; }

double theorem_rank_lower_bound(const TheoremBoundParams& p) {
    if (!(p.c > 4.0)) throw Error("theorem bound needs c > 4");
    if (!(p.delta > 0.0)) throw Error("theorem bound needs delta > 0");
    if (!(p.alpha > 0.0) || p.alpha > kAlphaCeiling) throw Error("alpha must lie in (0, 1/(128*3600*4^4)]");
    if (p.n < 2) throw Error("theorem bound needs n >= 2");
    const double n = static_cast<double>(p.n);
    const double lg = std::log2(n);
    const double d2 = p.delta * p.delta;
    const double c3 = p.c * p.c * p.c;
    const double value = p.alpha * (d2 * d2) / (c3 * c3 * c3) * n / (lg * lg);
    return std::min(n, value);
}

RankCertificate core_rank_certificate(const Embedding& plain, double c, std::optional<double> delta) {
    if (plain.kind() != EmbeddingKind::plain) throw Error("core certificate needs a plain embedding");
    if (!(c > 0)) throw Error("core certificate needs c > 0");
    const std::size_t n = plain.num_vertices();
    if (n < 2) throw Error("core certificate needs at least two vectors");
    const auto& x = plain.vectors();
    RankCertificate cert;

    const EdgeModel tdp = TdpModel{};
    const auto degrees = expected_degrees(plain, tdp);
    for (std::size_t i = 0; i < n; ++i)
        if (degrees[i] <= c) cert.degree_kept.push_back(i);

    if (delta) {
        cert.delta_estimate = *delta;
    } else {
        if (n > kExactTriangleLimit)
            throw Error("core certificate estimates delta exactly only for n <= " + std::to_string(kExactTriangleLimit) +
                        "; pass delta explicitly");
        const Eigen::MatrixXd p = probability_matrix(plain, tdp);
        const auto k = static_cast<Eigen::Index>(cert.degree_kept.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = 0; b < k; ++b)
                sub(a, b) = p(static_cast<Eigen::Index>(cert.degree_kept[static_cast<std::size_t>(a)]),
                              static_cast<Eigen::Index>(cert.degree_kept[static_cast<std::size_t>(b)]));
        cert.delta_estimate = expected_triangles_exact(sub) / static_cast<double>(n);
    }
    if (cert.degree_kept.empty()) {
        cert.empty_stage = "degree_cap";
        return cert;
    }

    const double nn = static_cast<double>(n);
    const double shortest = 1.0 / (nn * nn);
    const double longest = 2.0 * std::sqrt(nn);
    for (std::size_t i : cert.degree_kept) {
        const double len = x.row(static_cast<Eigen::Index>(i)).norm();
        if (len < shortest || len > longest) continue;
        cert.kept_indices.push_back(i);
        int exponent = 0;
        std::frexp(len, &exponent);  // len = m * 2^exponent, m in [0.5, 1)
        cert.buckets[exponent - 1].push_back(i);
    }
    if (cert.kept_indices.empty()) {
        cert.empty_stage = "length_window";
        return cert;
    }

    cert.bucket_threshold = cert.delta_estimate / (60.0 * c * c) * (nn / std::log2(nn));
    for (const auto& [r, members] : cert.buckets) {
        if (static_cast<double>(members.size()) < cert.bucket_threshold) continue;
        cert.core_buckets.push_back(r);
        cert.core_indices.insert(cert.core_indices.end(), members.begin(), members.end());
    }
    std::sort(cert.core_indices.begin(), cert.core_indices.end());
    if (cert.core_indices.empty()) {
        cert.empty_stage = "bucket_threshold";
        return cert;
    }

    RowMatrix core(static_cast<Eigen::Index>(cert.core_indices.size()), x.cols());
    for (std::size_t a = 0; a < cert.core_indices.size(); ++a)
        core.row(static_cast<Eigen::Index>(a)) = x.row(static_cast<Eigen::Index>(cert.core_indices[a]));
    const Eigen::MatrixXd gram = core * core.transpose();
    cert.gram_trace = gram.trace();
    cert.gram_sq_sum = gram.squaredNorm();
    cert.bound = cert.gram_sq_sum > 0 ? rank_lemma_bound(gram) : 0.0;
    return cert;
}

}  // namespace trifound
