#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstddef>
#include <cstdint>

namespace trifound {

struct EigenPairs {
    Eigen::VectorXd values;   // descending |lambda|
    Eigen::MatrixXd vectors;  // one column per value
};

// Full symmetric eigendecomposition, keeping the d largest-magnitude pairs.
EigenPairs dense_largest_magnitude(const Eigen::MatrixXd& a, std::size_t d);

struct LanczosOptions {
    double residual_tol = 1e-6;  // relative to ||A||_2
    std::size_t max_restarts = 500;
    std::size_t subspace = 0;  // 0 picks max(2d + 30, 60), capped at n
    std::uint64_t seed = 0x5eed;
};

// Thick-restart (Krylov-Schur) Lanczos with full reorthogonalization for the d
// largest-magnitude eigenpairs of a symmetric matrix. Throws
// ConvergenceError when the restart cap is reached or a returned pair misses
// the residual tolerance. Like any single-vector Krylov method it can return
// only one vector per exactly repeated eigenvalue reachable from the start
// vector.
EigenPairs lanczos_largest_magnitude(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, std::size_t d,
                                     const LanczosOptions& options = {});

}  // namespace trifound
