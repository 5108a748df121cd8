#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "trifound/graph.hpp"

namespace trifound {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class EmbeddingKind { spectral, plain };

// Per-vertex vectors. For a spectral embedding the rows are eigenvector
// entries psi_i and the pair score is psi_i^T diag(lambda) psi_j, an entry of
// the rank-d approximation A_d (signs of negative eigenvalues are kept). For a
// plain embedding the score is the ordinary dot product.
class Embedding {
public:
    Embedding() = default;
    static Embedding plain(RowMatrix vectors);
    static Embedding spectral(RowMatrix eigenvectors, Eigen::VectorXd eigenvalues);

    EmbeddingKind kind() const { return kind_; }
    std::size_t num_vertices() const { return static_cast<std::size_t>(vectors_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
    const RowMatrix& vectors() const { return vectors_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

    // Diagonal of the bilinear form: eigenvalues, or ones for plain vectors.
    const Eigen::VectorXd& score_weights() const { return weights_; }

    double pair_score(std::size_t i, std::size_t j) const;

private:
    EmbeddingKind kind_ = EmbeddingKind::plain;
    RowMatrix vectors_;
    Eigen::VectorXd eigenvalues_;
    Eigen::VectorXd weights_;
};

// Generalized dot product sum_r w_r x_ir x_jr, evaluated symmetrically.
inline double weighted_dot(const RowMatrix& x, const Eigen::VectorXd& w, std::size_t i, std::size_t j) {
    double s = 0.0;
    const auto d = x.cols();
    const double* a = x.row(static_cast<Eigen::Index>(i)).data();
    const double* b = x.row(static_cast<Eigen::Index>(j)).data();
    for (Eigen::Index r = 0; r < d; ++r) s += w[r] * (a[r] * b[r]);
    return s;
}

enum class EigenSolverKind { automatic, dense, lanczos };

struct SpectralOptions {
    EigenSolverKind solver = EigenSolverKind::automatic;
    // automatic picks the dense solver up to this many vertices.
    std::size_t dense_cutoff = 2000;
    // Required ||A psi - lambda psi|| / ||A|| for the iterative solver.
    double residual_tol = 1e-6;
    std::size_t max_restarts = 500;
    std::uint64_t seed = 0x5eed;
};

// Eigenpairs of the adjacency matrix for the d eigenvalues of largest
// magnitude, ordered by descending |lambda|. Each eigenvector is signed so
// that its largest-magnitude entry is positive.
Embedding spectral_embed(const Graph& g, std::size_t d, const SpectralOptions& options = {});

// Dense A_d (testing and small graphs).
Eigen::MatrixXd reconstruct(const Embedding& e);

// Text format:
//   n d [spectral|plain]
//   lambda: l_1 ... l_d        (spectral only)
//   vertex_id f_1 ... f_d      (n rows, any order)
// '#' comment lines may precede the header; a missing kind means plain, so
// word2vec-style node2vec output loads directly.
void save_embedding(const Embedding& e, std::ostream& out);
void save_embedding(const Embedding& e, const std::filesystem::path& path);
Embedding parse_embedding(std::istream& in);
Embedding load_embedding(const std::filesystem::path& path);
// Row ids are interpreted as the graph's original vertex labels.
Embedding load_embedding(const std::filesystem::path& path, const Graph& g);

}  // namespace trifound
