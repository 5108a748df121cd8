#include "trifound/pairs.hpp"

#include <algorithm>

#include "trifound/error.hpp"

namespace trifound {

std::vector<RowBlock> row_blocks(std::size_t n, std::size_t pairs_per_block) {
    if (pairs_per_block == 0) throw Error("block size must be positive");
    std::vector<RowBlock> blocks;
    std::size_t begin = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pairs += n - 1 - i;
        if (pairs >= pairs_per_block) {
            blocks.push_back({begin, i + 1});
            begin = i + 1;
            pairs = 0;
        }
    }
    if (begin < n) blocks.push_back({begin, n});
    return blocks;
}

void score_strip(const Embedding& e, const Eigen::VectorXd& weights, RowBlock rows, RowMatrix& out) {
    const auto& x = e.vectors();
    const auto len = static_cast<Eigen::Index>(rows.end - rows.begin);
    const RowMatrix scaled = x.middleRows(static_cast<Eigen::Index>(rows.begin), len) * weights.asDiagonal();
    out.resize(len, x.rows());
    out.noalias() = scaled * x.transpose();
}

PairProbabilities::PairProbabilities(const Embedding& e, const EdgeModel& model)
    : e_(&e), model_(&model), weights_(model_score_weights(model, e)) {}

void PairProbabilities::strip(RowBlock rows, RowMatrix& out) const {
    score_strip(*e_, weights_, rows, out);
    const auto n = out.cols();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const auto i = rows.begin + static_cast<std::size_t>(r);
        double* row = out.row(r).data();
        for (Eigen::Index j = 0; j < n; ++j)
            row[j] = static_cast<std::size_t>(j) == i ? 0.0 : apply_link(*model_, row[j], i, static_cast<std::size_t>(j));
    }
}

Eigen::MatrixXd probability_matrix(const Embedding& e, const EdgeModel& model) {
    const std::size_t n = e.num_vertices();
    PairProbabilities probs(e, model);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    RowMatrix strip;
    for (const auto block : row_blocks(n, 1 << 16)) {
        probs.strip(block, strip);
        for (std::size_t i = block.begin; i < block.end; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = strip(static_cast<Eigen::Index>(i - block.begin), static_cast<Eigen::Index>(j));
                p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
            }
    }
    return p;
}

}  // namespace trifound
