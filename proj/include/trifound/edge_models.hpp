#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "trifound/embedding.hpp"
#include "trifound/graph.hpp"

namespace trifound {

// Truncated dot product: clamp(score, 0, 1).
struct TdpModel {};

// p = ceiling * sigmoid(k * score + intercept), i.e. the logistic
// L / (1 + exp(-k (score - x0))) with x0 = -intercept / k.
struct LrdpModel {
    double k = 0.0;
    double intercept = 0.0;
    double ceiling = 1.0;
    double x0() const;  // NaN when k == 0
};

// p = sigmoid(intercept + sum_r weights_r * f_r), with the Hadamard feature
// f_r = w_r x_ir x_jr (w_r the embedding's score weight, so unit weights
// recover the pair score).
struct LrhpModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;
};

// Directed intensity q_ij = scale_i * exp(score_ij - shift_i), normalized so
// each row sums to the vertex degree; p_ij = min(1, (q_ij + q_ji) / 2).
struct SoftmaxModel {
    Eigen::VectorXd scale;
    Eigen::VectorXd shift;
};

using EdgeModel = std::variant<TdpModel, LrdpModel, LrhpModel, SoftmaxModel>;

enum class ModelKind { tdp, lrdp, lrhp, softmax };

ModelKind model_kind(const EdgeModel& model);
std::string model_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct FitReport {
    std::size_t target_edges = 0;
    double achieved_expected_edges = 0.0;
    std::size_t iterations = 0;  // Newton + calibration steps
    bool converged = false;
    std::size_t newton_iterations = 0;
    std::size_t calibration_iterations = 0;
    std::size_t negatives = 0;
    double negative_weight = 0.0;
};

struct FitOptions {
    std::size_t negative_ratio = 10;
    std::uint64_t seed = 0;
    std::size_t max_newton_iterations = 100;
    std::size_t max_calibration_iterations = 200;
    // Relative |sum p - m| / m required for FitReport::converged.
    double calibration_tol = 1e-3;
    unsigned threads = 1;
};

double sigmoid(double x);
double tdp_probability(double score);

// Weighted logistic regression on the pair score, then intercept calibration
// so the exact expected edge count over all pairs matches m.
std::pair<EdgeModel, FitReport> fit_lrdp(const Embedding& e, const Graph& g, const FitOptions& options = {});
// Same procedure on the Hadamard features.
std::pair<EdgeModel, FitReport> fit_lrhp(const Embedding& e, const Graph& g, const FitOptions& options = {});

EdgeModel build_softmax(const Embedding& e, const Graph& g, unsigned threads = 1);

struct SoftmaxCheck {
    std::vector<double> row_sums;  // sum_{j != i} q_ij
    std::size_t clamped_pairs = 0; // pairs with (q_ij + q_ji) / 2 > 1
};
SoftmaxCheck softmax_check(const SoftmaxModel& model, const Embedding& e, unsigned threads = 1);

// Probability of edge {i, j}; rejects i == j.
double edge_probability(const EdgeModel& model, const Embedding& e, std::size_t i, std::size_t j);

// Diagonal weights of the bilinear form a model feeds into its link.
Eigen::VectorXd model_score_weights(const EdgeModel& model, const Embedding& e);
// Link from the model's bilinear score to a probability.
double apply_link(const EdgeModel& model, double score, std::size_t i, std::size_t j);

std::string model_to_json(const EdgeModel& model);
EdgeModel model_from_json(std::string_view json);
// FNV-1a digest of the JSON form, as 16 hex digits.
std::string model_digest(const EdgeModel& model);

}  // namespace trifound
