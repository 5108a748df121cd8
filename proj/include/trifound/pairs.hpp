#pragma once

#include <cstddef>
#include <vector>

#include "trifound/edge_models.hpp"
#include "trifound/embedding.hpp"

namespace trifound {

// Contiguous vertex rows; the work unit covers the pairs (i, j), j > i, of
// every row i in [begin, end).
struct RowBlock {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Partition of [0, n) into row blocks holding about pairs_per_block upper
// triangle pairs each. Depends only on its arguments.
std::vector<RowBlock> row_blocks(std::size_t n, std::size_t pairs_per_block);

// out = X[rows] diag(weights) X^T, one full row strip of pair scores.
void score_strip(const Embedding& e, const Eigen::VectorXd& weights, RowBlock rows, RowMatrix& out);

// Evaluates p_ij for (embedding, model) a strip at a time; nothing of size
// n x n is allocated.
class PairProbabilities {
public:
    PairProbabilities(const Embedding& e, const EdgeModel& model);

    std::size_t num_vertices() const { return e_->num_vertices(); }
    // Probabilities for rows x all columns; the diagonal is 0.
    void strip(RowBlock rows, RowMatrix& out) const;
    double pair(std::size_t i, std::size_t j) const { return edge_probability(*model_, *e_, i, j); }
    const Embedding& embedding() const { return *e_; }
    const EdgeModel& model() const { return *model_; }

private:
    const Embedding* e_;
    const EdgeModel* model_;
    Eigen::VectorXd weights_;
};

// Dense symmetric probability matrix with zero diagonal (small n only).
Eigen::MatrixXd probability_matrix(const Embedding& e, const EdgeModel& model);

}  // namespace trifound
