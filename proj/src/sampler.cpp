#include "trifound/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trifound/error.hpp"
#include "trifound/parallel.hpp"
#include "trifound/rng.hpp"

namespace trifound {

namespace {
constexpr std::size_t kCachePairs = std::size_t{1} << 24;
}

GraphSampler::GraphSampler(const Embedding& e, const EdgeModel& model, std::size_t block_size, unsigned threads)
    : probs_(e, model), blocks_(row_blocks(e.num_vertices(), block_size)), threads_(threads) {
    const std::size_t n = e.num_vertices();
    if ((n < 2 ? 0 : n * (n - 1) / 2) <= kCachePairs) {
        cache_.resize(blocks_.size());
        parallel_for(blocks_.size(), threads_, [&](std::size_t b) { block_probabilities(b, cache_[b]); });
    }
}

void GraphSampler::block_probabilities(std::size_t b, std::vector<double>& out) const {
    const std::size_t n = probs_.num_vertices();
    RowMatrix strip;
    probs_.strip(blocks_[b], strip);
    out.clear();
    for (std::size_t i = blocks_[b].begin; i < blocks_[b].end; ++i) {
        const auto row = strip.row(static_cast<Eigen::Index>(i - blocks_[b].begin));
        for (std::size_t j = i + 1; j < n; ++j) out.push_back(row[static_cast<Eigen::Index>(j)]);
    }
}

Graph GraphSampler::sample(std::uint64_t seed, std::uint64_t sample_index) const {
    const std::size_t n = probs_.num_vertices();
    std::vector<std::vector<Edge>> found(blocks_.size());
    parallel_for(blocks_.size(), threads_, [&](std::size_t b) {
        std::vector<double> local;
        const std::vector<double>* p = &local;
        if (cache_.empty()) block_probabilities(b, local);
        else p = &cache_[b];
        Rng rng({seed, sample_index, static_cast<std::uint64_t>(b)});
        std::size_t k = 0;
        for (std::size_t i = blocks_[b].begin; i < blocks_[b].end; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.uniform() < (*p)[k++]) found[b].emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    });
    std::vector<Edge> edges;
    for (const auto& f : found) edges.insert(edges.end(), f.begin(), f.end());
    return Graph::from_edges(n, edges);
}

Graph sample_graph(const Embedding& e, const EdgeModel& model, std::uint64_t seed, std::uint64_t sample_index,
                   std::size_t block_size, unsigned threads) {
    return GraphSampler(e, model, block_size, threads).sample(seed, sample_index);
}

std::vector<double> expected_degrees(const Embedding& e, const EdgeModel& model, unsigned threads) {
    const std::size_t n = e.num_vertices();
    PairProbabilities probs(e, model);
    const auto blocks = row_blocks(n, 1 << 16);
    std::vector<double> out(n, 0.0);
    parallel_for(blocks.size(), threads, [&](std::size_t b) {
        RowMatrix strip;
        probs.strip(blocks[b], strip);
        for (std::size_t i = blocks[b].begin; i < blocks[b].end; ++i) {
            CompensatedSum sum;
            const auto row = strip.row(static_cast<Eigen::Index>(i - blocks[b].begin));
            for (Eigen::Index j = 0; j < row.size(); ++j) sum.add(row[j]);  // diagonal is 0
            out[i] = sum.value();
        }
    });
    return out;
}

std::vector<double> degree_second_moments(const Embedding& e, const EdgeModel& model) {
    const Eigen::MatrixXd p = probability_matrix(e, model);
    std::vector<double> out(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        CompensatedSum first, squares;
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            first.add(p(i, j));
            squares.add(p(i, j) * p(i, j));
        }
        const double mean = first.value();
        // sum_{j != j'} p_j p_j' = (sum p)^2 - sum p^2
        out[static_cast<std::size_t>(i)] = mean + mean * mean - squares.value();
    }
    return out;
}

DegreeDistribution expected_degree_distribution(std::span<const double> expected) {
    DegreeDistribution dist;
    for (double value : expected) dist.entries[static_cast<std::size_t>(std::llround(std::max(0.0, value)))] += 1.0;
    return dist;
}

double expected_triangles_exact(const Eigen::MatrixXd& p) {
    const Eigen::Index n = p.rows();
    if (static_cast<std::size_t>(n) > kExactTriangleLimit)
        throw Error("exact expected triangles refused for n=" + std::to_string(n) + " > " + std::to_string(kExactTriangleLimit) +
                    "; estimate by sampling instead");
    CompensatedSum total;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double pij = p(i, j);
            if (pij == 0.0) continue;
            double inner = 0.0;
            for (Eigen::Index k = j + 1; k < n; ++k) inner += p(i, k) * p(j, k);
            total.add(pij * inner);
        }
    return total.value();
}

double expected_triangles_exact(const Embedding& e, const EdgeModel& model) {
    if (e.num_vertices() > kExactTriangleLimit)
        throw Error("exact expected triangles refused for n=" + std::to_string(e.num_vertices()) + " > " +
                    std::to_string(kExactTriangleLimit) + "; estimate by sampling instead");
    return expected_triangles_exact(probability_matrix(e, model));
}

SampledCurves sample_curves(const Embedding& e, const EdgeModel& model, const SampleSpec& spec, std::size_t n_ref) {
    if (spec.num_samples < 1) throw Error("num_samples must be at least 1");
    const GraphSampler sampler(e, model, spec.block_size, spec.threads);
    std::vector<TriangleFoundationCurve> curves;
    curves.reserve(spec.num_samples);
    std::set<std::size_t> grid;
    for (std::size_t s = 0; s < spec.num_samples; ++s) {
        curves.push_back(triangle_foundation_curve(sampler.sample(spec.seed, s), n_ref, spec.threads));
        for (const auto& p : curves.back().points) grid.insert(p.c);
    }
    SampledCurves out;
    out.num_samples = spec.num_samples;
    out.max.n_ref = n_ref;
    for (std::size_t c : grid) {
        double best = 0.0;
        CompensatedSum sum;
        for (const auto& curve : curves) {
            const double tri = curve.triangles_at(c);
            best = std::max(best, tri);
            sum.add(curve.delta_at(c));
        }
        const double mean = sum.value() / static_cast<double>(curves.size());
        CompensatedSum sq;
        for (const auto& curve : curves) sq.add((curve.delta_at(c) - mean) * (curve.delta_at(c) - mean));
        out.max.points.push_back({c, best, best / static_cast<double>(n_ref)});
        out.mean.push_back(mean);
        out.variance.push_back(curves.size() > 1 ? sq.value() / static_cast<double>(curves.size() - 1) : 0.0);
    }
    return out;
}

TriangleFoundationCurve max_curve_over_samples(const Embedding& e, const EdgeModel& model, const SampleSpec& spec,
                                               std::size_t n_ref) {
    return sample_curves(e, model, spec, n_ref).max;
}

}  // namespace trifound
