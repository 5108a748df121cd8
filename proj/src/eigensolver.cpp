#include "trifound/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "trifound/error.hpp"
#include "trifound/rng.hpp"

namespace trifound {

namespace {

// Indices ordered by descending |value|, positive first on ties.
std::vector<Eigen::Index> magnitude_order(const Eigen::VectorXd& values) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(values[a]), mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return values[a] > values[b];
    });
    return order;
}

void orthogonalize(Eigen::Ref<Eigen::VectorXd> w, const Eigen::Ref<const Eigen::MatrixXd>& basis,
                   Eigen::Ref<Eigen::VectorXd> coeffs) {
    coeffs.noalias() = basis.transpose() * w;
    w.noalias() -= basis * coeffs;
    // Second pass restores orthogonality lost to cancellation.
    const Eigen::VectorXd again = basis.transpose() * w;
    w.noalias() -= basis * again;
    coeffs += again;
}

}  // namespace

EigenPairs dense_largest_magnitude(const Eigen::MatrixXd& a, std::size_t d) {
    const auto n = static_cast<std::size_t>(a.rows());
    if (a.rows() != a.cols()) throw Error("eigensolver needs a square matrix");
    if (d < 1 || d > n) throw Error("requested " + std::to_string(d) + " eigenpairs of a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense symmetric eigensolver did not converge");
    const auto order = magnitude_order(solver.eigenvalues());
    EigenPairs out;
    out.values.resize(static_cast<Eigen::Index>(d));
    out.vectors.resize(a.rows(), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
        out.values[static_cast<Eigen::Index>(k)] = solver.eigenvalues()[order[k]];
        out.vectors.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(order[k]);
    }
    return out;
}

EigenPairs lanczos_largest_magnitude(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, std::size_t d,
                                     const LanczosOptions& options) {
    const Eigen::Index n = a.rows();
    if (a.rows() != a.cols()) throw Error("eigensolver needs a square matrix");
    if (d < 1 || static_cast<Eigen::Index>(d) > n)
        throw Error("requested " + std::to_string(d) + " eigenpairs of a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    const auto wanted = static_cast<Eigen::Index>(d);
    Eigen::Index m = options.subspace ? static_cast<Eigen::Index>(options.subspace) : std::max<Eigen::Index>(2 * wanted + 30, 60);
    m = std::clamp(m, wanted, n);
    const Eigen::Index keep = std::min(m - 1, wanted + (m - wanted) / 2);
    // Ritz estimates are tightened below the requested tolerance so the
    // explicit residual check at the end has slack.
    const double ritz_tol = 0.01 * options.residual_tol;

    Rng rng(substream_seed({options.seed, static_cast<std::uint64_t>(n), d}));
    auto random_unit = [&](Eigen::Index basis_size, const Eigen::MatrixXd& v) {
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) r[i] = rng.normal();
        if (basis_size > 0) {
            Eigen::VectorXd scratch(basis_size);
            orthogonalize(r, v.leftCols(basis_size), scratch);
        }
        return Eigen::VectorXd(r / r.norm());
    };

    Eigen::MatrixXd v(n, m + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    v.col(0) = random_unit(0, v);
    Eigen::Index k = 0;
    double anorm = 0.0;
    Eigen::VectorXd w(n);
    Eigen::VectorXd coeffs(m);

    for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
        double beta = 0.0;
        for (Eigen::Index j = k; j < m; ++j) {
            w.noalias() = a * v.col(j);
            auto c = coeffs.head(j + 1);
            orthogonalize(w, v.leftCols(j + 1), c);
            h.col(j).head(j + 1) = c;
            beta = w.norm();
            anorm = std::max(anorm, std::abs(c[j]));
            if (beta <= 1e-12 * std::max(anorm, 1.0)) {
                // Invariant subspace: continue from a fresh orthogonal direction.
                beta = 0.0;
                if (j + 1 < n) v.col(j + 1) = random_unit(j + 1, v);
                else v.col(j + 1).setZero();
            } else {
                v.col(j + 1) = w / beta;
            }
        }

        Eigen::MatrixXd projected = h.triangularView<Eigen::Upper>();
        projected.triangularView<Eigen::StrictlyLower>() = projected.transpose().triangularView<Eigen::StrictlyLower>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected);
        if (small.info() != Eigen::Success) throw ConvergenceError("projected eigenproblem failed");
        const auto order = magnitude_order(small.eigenvalues());
        Eigen::VectorXd theta(m);
        Eigen::MatrixXd s(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            theta[i] = small.eigenvalues()[order[static_cast<std::size_t>(i)]];
            s.col(i) = small.eigenvectors().col(order[static_cast<std::size_t>(i)]);
        }
        anorm = std::max(anorm, std::abs(theta[0]));

        bool converged = true;
        for (Eigen::Index i = 0; i < wanted && converged; ++i)
            converged = std::abs(beta * s(m - 1, i)) <= ritz_tol * anorm;

        if (converged || m == n) {
            EigenPairs out;
            out.values = theta.head(wanted);
            out.vectors = v.leftCols(m) * s.leftCols(wanted);
            for (Eigen::Index i = 0; i < wanted; ++i) {
                const Eigen::VectorXd col = out.vectors.col(i);
                const double residual = (a * col - out.values[i] * col).norm();
                if (residual > options.residual_tol * anorm)
                    throw ConvergenceError("Lanczos eigenpair " + std::to_string(i) + " has relative residual " +
                                           std::to_string(residual / anorm));
            }
            return out;
        }

        // Thick restart on the leading Ritz vectors; the residual direction
        // becomes the next basis vector.
        const Eigen::MatrixXd ritz = v.leftCols(m) * s.leftCols(keep);
        v.leftCols(keep) = ritz;
        v.col(keep) = v.col(m);
        h.setZero();
        h.topLeftCorner(keep, keep).diagonal() = theta.head(keep);
        k = keep;
    }
    throw ConvergenceError("Lanczos did not converge within " + std::to_string(options.max_restarts) + " restarts");
}

}  // namespace trifound
