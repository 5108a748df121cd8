#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trifound/edge_models.hpp"
#include "trifound/embedding.hpp"
#include "trifound/graph.hpp"
#include "trifound/pairs.hpp"

namespace trifound {

struct SampleSpec {
    std::uint64_t seed = 0;
    std::size_t num_samples = 100;
    std::size_t block_size = 1 << 16;  // upper-triangle pairs per work unit
    unsigned threads = 1;
};

// Draws graphs with independent Bernoulli(p_ij) edges. Pair block b of sample
// s consumes one uniform per pair from the substream (seed, s, b), so the
// output does not depend on the thread count. Probabilities are cached when
// there are at most 2^24 pairs.
class GraphSampler {
public:
    GraphSampler(const Embedding& e, const EdgeModel& model, std::size_t block_size = 1 << 16, unsigned threads = 1);

    Graph sample(std::uint64_t seed, std::uint64_t sample_index) const;
    std::size_t num_vertices() const { return probs_.num_vertices(); }

private:
    void block_probabilities(std::size_t b, std::vector<double>& out) const;

    PairProbabilities probs_;
    std::vector<RowBlock> blocks_;
    unsigned threads_;
    std::vector<std::vector<double>> cache_;
};

Graph sample_graph(const Embedding& e, const EdgeModel& model, std::uint64_t seed, std::uint64_t sample_index,
                   std::size_t block_size = 1 << 16, unsigned threads = 1);

// E[D_i] = sum_{j != i} p_ij, compensated.
std::vector<double> expected_degrees(const Embedding& e, const EdgeModel& model, unsigned threads = 1);

// Exact E[D_i^2] = E[D_i] + sum_{j != j'} p_ij p_ij' under edge independence.
std::vector<double> degree_second_moments(const Embedding& e, const EdgeModel& model);

// Histogram of expected degrees rounded to the nearest integer.
DegreeDistribution expected_degree_distribution(std::span<const double> expected);

constexpr std::size_t kExactTriangleLimit = 500;

// sum_{i<j<k} p_ij p_jk p_ik. Refuses n > 500.
double expected_triangles_exact(const Embedding& e, const EdgeModel& model);
double expected_triangles_exact(const Eigen::MatrixXd& probabilities);

struct SampledCurves {
    TriangleFoundationCurve max;  // pointwise maximum on the union grid
    std::vector<double> mean;     // per grid point, delta units
    std::vector<double> variance; // unbiased; 0 for a single sample
    std::size_t num_samples = 0;
};

SampledCurves sample_curves(const Embedding& e, const EdgeModel& model, const SampleSpec& spec, std::size_t n_ref);
TriangleFoundationCurve max_curve_over_samples(const Embedding& e, const EdgeModel& model, const SampleSpec& spec,
                                               std::size_t n_ref);

}  // namespace trifound
