#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trifound/embedding.hpp"
#include "trifound/graph.hpp"

namespace trifound {

// (sum_i M_ii)^2 / sum_ij |M_ij|^2, a lower bound on rank(M) for any square M.
double rank_lemma_bound(const Eigen::MatrixXd& m);

// Number of singular values above rel_tol * sigma_max.
std::size_t numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

// Largest u_i . u_j over i != j for unit rows u_i. Any 4d unit vectors in R^d
// contain a pair with dot product at least 1/(4d).
double packing_max_dot(const RowMatrix& unit_vectors);

// Pick the lowest remaining index, drop it and its neighbors, repeat. The
// result is independent and has at least h / (b + 1) vertices.
std::vector<Vertex> greedy_independent_set(const Graph& g);

// Ordered-pair sums (diagonal included) of |w_i . w_j| over negative and
// positive dot products. Expanding |sum_i w_i|^2 >= 0 gives negative <= positive.
struct DotMass {
    double negative = 0.0;
    double positive = 0.0;
};
DotMass dot_mass_split(const RowMatrix& vectors);

// Equal-length bound sqrt(delta) / c on vector length implied by
// delta * n <= L^2 c^2 n.
double length_lower_bound(double c, double delta);
// Varying-length version, sqrt(delta) / (4c): the longest surviving bucket
// of the core has at least this scale.
double core_length_lower_bound(double c, double delta);

// Largest alpha for which the core rank argument goes through.
inline constexpr double kAlphaCeiling = 1.0 / (128.0 * 3600.0 * 256.0);

struct TheoremBoundParams {
    std::uint64_t n = 0;
    double c = 0.0;      // expected-degree cap, > 4
    double delta = 0.0;  // triangle density, > 0
    double alpha = kAlphaCeiling;
};

// min(n, alpha * delta^4 / c^9 * n / log2(n)^2). The constant makes this an
// asymptotic statement, not a sharp bound for concrete instances.
double theorem_rank_lower_bound(const TheoremBoundParams& p);

struct RankCertificate {
    std::vector<std::size_t> degree_kept;  // expected TDP degree <= c
    std::vector<std::size_t> kept_indices; // ... and length in [n^-2, 2 sqrt(n)]
    std::map<int, std::vector<std::size_t>> buckets;  // r -> lengths in [2^r, 2^(r+1))
    std::vector<int> core_buckets;
    std::vector<std::size_t> core_indices;
    double delta_estimate = 0.0;
    double bucket_threshold = 0.0;  // (delta / 60 c^2) (n / lg n)
    double gram_trace = 0.0;
    double gram_sq_sum = 0.0;
    double bound = 0.0;
    std::string empty_stage;  // "", "degree_cap", "length_window" or "bucket_threshold"
};

// Replays the core decomposition of the rank lower-bound argument on a plain
// embedding: degree cap, length window, power-of-two length buckets, large
// buckets, then the rank lemma on the core Gram matrix. delta defaults to the
// exact expected density of TDP triangles among degree-capped vertices, which
// needs n <= 500.
RankCertificate core_rank_certificate(const Embedding& plain, double c, std::optional<double> delta = std::nullopt);

}  // namespace trifound
