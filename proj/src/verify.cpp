#include "trifound/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "trifound/edge_models.hpp"
#include "trifound/embedding.hpp"
#include "trifound/graph.hpp"
#include "trifound/parallel.hpp"
#include "trifound/rng.hpp"
#include "trifound/sampler.hpp"
#include "trifound/theory.hpp"

namespace trifound {

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

RowMatrix normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

// Collects per-trial slack; trials run in parallel and are merged in order.
struct Trial {
    double margin = std::numeric_limits<double>::infinity();
    bool ok = true;
    json counterexample;
};

template <class Fn>
PropertyResult sweep(std::string name, std::size_t trials, unsigned threads, Fn&& fn) {
    std::vector<Trial> results(trials);
    parallel_for(trials, threads, [&](std::size_t t) { results[t] = fn(t); });
    PropertyResult out;
    out.name = std::move(name);
    out.trials = trials;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        out.worst_margin = std::min(out.worst_margin, results[t].margin);
        if (!results[t].ok) {
            if (out.failures == 0) {
                results[t].counterexample["trial"] = t;
                out.counterexample = results[t].counterexample.dump();
            }
            ++out.failures;
        }
    }
    return out;
}

Eigen::MatrixXd mixed_rank_matrix(Rng& rng) {
    const auto n = static_cast<Eigen::Index>(1 + rng.below(20));
    const auto r = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(n)));
    switch (rng.below(4)) {
        case 0: {  // general product of rank r
            const RowMatrix a = normal_matrix(rng, n, r), b = normal_matrix(rng, n, r);
            return a * b.transpose();
        }
        case 1: {  // Gram matrix of n vectors in R^r
            const RowMatrix v = normal_matrix(rng, n, r);
            return v * v.transpose();
        }
        case 2: {  // diagonal with r non-zeros, mixed signs and scales
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
            for (Eigen::Index i = 0; i < r; ++i) m(i, i) = rng.normal() * std::exp(rng.normal());
            if (m.squaredNorm() == 0.0) m(0, 0) = 1.0;
            return m;
        }
        default: {  // rank one with a constant block
            Eigen::VectorXd u = Eigen::VectorXd::Ones(n), v = Eigen::VectorXd::Ones(n);
            for (Eigen::Index i = 0; i < n; ++i) v[i] += 0.1 * static_cast<double>(rng.below(3));
            return u * v.transpose();
        }
    }
}

// Random plain embedding whose dot products are mostly in a useful range.
Embedding random_plain(Rng& rng, std::size_t n, std::size_t d, double scale) {
    RowMatrix v = normal_matrix(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    v *= scale / std::sqrt(static_cast<double>(d));
    return Embedding::plain(std::move(v));
}

}  // namespace

PropertyResult check_rank_lemma(const VerifyOptions& options) {
    auto bound_fn = options.rank_bound ? options.rank_bound : [](const Eigen::MatrixXd& m) { return rank_lemma_bound(m); };
    return sweep("rank_trace_bound", options.rank_trials, options.threads, [&](std::size_t t) {
        Rng rng({options.seed, 1, t});
        const Eigen::MatrixXd m = mixed_rank_matrix(rng);
        const double bound = bound_fn(m);
        const auto rank = static_cast<double>(numeric_rank(m));
        Trial trial;
        trial.margin = rank - bound;
        trial.ok = trial.margin >= -1e-6 * rank;
        if (!trial.ok) trial.counterexample = {{"matrix", matrix_json(m)}, {"bound", bound}, {"numeric_rank", rank}};
        return trial;
    });
}

PropertyResult check_dot_mass(const VerifyOptions& options) {
    return sweep("negative_dot_mass", options.neg_trials, options.threads, [&](std::size_t t) {
        Rng rng({options.seed, 2, t});
        const auto s = static_cast<Eigen::Index>(1 + rng.below(30));
        const auto d = static_cast<Eigen::Index>(1 + rng.below(10));
        RowMatrix w = normal_matrix(rng, s, d);
        for (Eigen::Index i = 0; i < s; ++i) w.row(i) *= std::exp(rng.normal());
        const DotMass mass = dot_mass_split(w);
        Trial trial;
        trial.margin = mass.positive - mass.negative;
        trial.ok = trial.margin >= -1e-12 * (mass.positive + mass.negative);
        if (!trial.ok) trial.counterexample = {{"vectors", matrix_json(w)}, {"negative", mass.negative}, {"positive", mass.positive}};
        return trial;
    });
}

PropertyResult check_packing(const VerifyOptions& options) {
    const std::size_t per_dim = options.packing_trials;
    return sweep("unit_vector_packing", per_dim * options.packing_max_dim, options.threads, [&](std::size_t t) {
        const std::size_t d = 1 + t / per_dim;
        Rng rng({options.seed, 3, t});
        RowMatrix u = normal_matrix(rng, static_cast<Eigen::Index>(4 * d), static_cast<Eigen::Index>(d));
        u.rowwise().normalize();
        const double best = packing_max_dot(u);
        const double floor = 1.0 / (4.0 * static_cast<double>(d));
        Trial trial;
        trial.margin = best - floor;
        trial.ok = best >= floor - 1e-12;
        if (!trial.ok) trial.counterexample = {{"d", d}, {"vectors", matrix_json(u)}, {"max_dot", best}};
        return trial;
    });
}

PropertyResult check_independent_set(const VerifyOptions& options) {
    return sweep("greedy_independent_set", options.independent_set_trials, options.threads, [&](std::size_t t) {
        Rng rng({options.seed, 4, t});
        constexpr std::size_t n = 50;
        const double p = rng.uniform(0.0, 0.5);
        std::vector<Edge> edges;
        for (Vertex i = 0; i < n; ++i)
            for (Vertex j = i + 1; j < n; ++j)
                if (rng.uniform() < p) edges.emplace_back(i, j);
        const Graph g = Graph::from_edges(n, edges);
        const auto set = greedy_independent_set(g);
        bool independent = true;
        for (std::size_t a = 0; a < set.size() && independent; ++a)
            for (std::size_t b = a + 1; b < set.size() && independent; ++b) independent = !g.has_edge(set[a], set[b]);
        const double floor = static_cast<double>(n) / static_cast<double>(g.max_degree() + 1);
        Trial trial;
        trial.margin = independent ? static_cast<double>(set.size()) - floor : -1.0;
        trial.ok = independent && trial.margin >= 0.0;
        if (!trial.ok) {
            json e = json::array();
            for (auto [u, v] : g.edges()) e.push_back({u, v});
            trial.counterexample = {{"n", n}, {"edges", e}, {"set", set}, {"independent", independent}};
        }
        return trial;
    });
}

PropertyResult check_degree_second_moment(const VerifyOptions& options) {
    return sweep("degree_second_moment", options.second_moment_trials, options.threads, [&](std::size_t t) {
        Rng rng({options.seed, 5, t});
        const std::size_t n = 10 + rng.below(91);
        const std::size_t d = 2 + rng.below(7);
        const Embedding e = random_plain(rng, n, d, rng.uniform(0.3, 1.5));
        std::vector<EdgeModel> models{TdpModel{}};
        const Graph g = sample_graph(e, TdpModel{}, options.seed + t, 0);
        if (g.num_edges() > 0) {
            FitOptions fit;
            fit.seed = options.seed + t;
            models.push_back(fit_lrdp(e, g, fit).first);
            models.push_back(fit_lrhp(e, g, fit).first);
            models.push_back(build_softmax(e, g));
        }
        Trial trial;
        for (const auto& model : models) {
            const auto first = expected_degrees(e, model);
            const auto second = degree_second_moments(e, model);
            for (std::size_t i = 0; i < n; ++i) {
                const double rhs = first[i] + first[i] * first[i];
                const double margin = rhs - second[i];
                trial.margin = std::min(trial.margin, margin);
                if (margin < -1e-9 * std::max(1.0, rhs) && trial.ok) {
                    trial.ok = false;
                    trial.counterexample = {{"model", model_to_json(model)}, {"vertex", i}, {"E[D]", first[i]}, {"E[D^2]", second[i]}};
                }
            }
        }
        return trial;
    });
}

PropertyResult check_triangle_sketch_bound(const VerifyOptions& options) {
    return sweep("triangle_degree_bound", options.triangle_bound_trials, options.threads, [&](std::size_t t) {
        Rng rng({options.seed, 6, t});
        const std::size_t n = 10 + rng.below(91);
        const std::size_t d = 1 + rng.below(8);
        RowMatrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < v.rows(); ++i)
            for (Eigen::Index r = 0; r < v.cols(); ++r) v(i, r) = rng.uniform();
        // Rescale so every pair score is at most 1.
        const double top = (v * v.transpose()).maxCoeff();
        v *= rng.uniform(0.2, 1.0) / std::sqrt(top);
        const Embedding e = Embedding::plain(v);
        const EdgeModel tdp = TdpModel{};
        const Eigen::MatrixXd p = probability_matrix(e, tdp);
        const double lhs = expected_triangles_exact(p);
        const auto degrees = expected_degrees(e, tdp);
        CompensatedSum sq;
        for (double x : degrees) sq.add(x * x);
        const double rhs = p.maxCoeff() * sq.value();
        Trial trial;
        trial.margin = rhs - lhs;
        trial.ok = trial.margin >= -1e-12 * std::max(1.0, rhs);
        if (!trial.ok) trial.counterexample = {{"vectors", matrix_json(v)}, {"expected_triangles", lhs}, {"bound", rhs}};
        return trial;
    });
}

PropertyResult check_certificate_dimension(const VerifyOptions& options) {
    return sweep("certificate_within_dimension", options.certificate_trials, options.threads, [&](std::size_t t) {
        Rng rng({options.seed, 7, t});
        const std::size_t n = 20 + rng.below(181);
        const std::size_t d = 1 + rng.below(8);
        RowMatrix v = normal_matrix(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        v.rowwise().normalize();
        v *= rng.uniform(0.05, 0.6);
        const Embedding e = Embedding::plain(v);
        const auto cert = core_rank_certificate(e, rng.uniform(4.5, 20.0));
        Trial trial;
        trial.margin = static_cast<double>(d) - cert.bound;
        trial.ok = trial.margin >= -1e-9 * static_cast<double>(d);
        if (!trial.ok) trial.counterexample = {{"vectors", matrix_json(v)}, {"bound", cert.bound}, {"d", d}};
        return trial;
    });
}

PropertyResult check_theorem_scaling(const VerifyOptions& options) {
    // Quartic in delta (until the min with n binds) and decreasing in c.
    return sweep("rank_bound_scaling", 20, options.threads, [&](std::size_t t) {
        TheoremBoundParams p;
        p.n = std::uint64_t{1000} << (t % 10);
        p.c = 4.5 + static_cast<double>(t);
        p.delta = 0.5 + 0.25 * static_cast<double>(t);
        const double base = theorem_rank_lower_bound(p);
        TheoremBoundParams doubled = p;
        doubled.delta *= 2.0;
        TheoremBoundParams wider = p;
        wider.c += 1.0;
        const double expect = std::min(static_cast<double>(p.n), 16.0 * base);
        const double got = theorem_rank_lower_bound(doubled);
        Trial trial;
        const double rel = std::abs(got - expect) / expect;
        trial.margin = 1e-12 - rel;
        trial.ok = rel <= 1e-12 && theorem_rank_lower_bound(wider) <= base;
        if (!trial.ok) trial.counterexample = {{"n", p.n}, {"c", p.c}, {"delta", p.delta}, {"bound", base}, {"doubled", got}};
        return trial;
    });
}

std::vector<PropertyResult> run_theory_checks(const VerifyOptions& options) {
    return {
        check_rank_lemma(options),      check_dot_mass(options),           check_packing(options),
        check_independent_set(options), check_degree_second_moment(options),          check_triangle_sketch_bound(options),
        check_certificate_dimension(options), check_theorem_scaling(options),
    };
}

std::string theory_report_json(const std::vector<PropertyResult>& results) {
    json props = json::array();
    bool all = true;
    for (const auto& r : results) {
        json p = {{"name", r.name}, {"trials", r.trials}, {"failures", r.failures}, {"worst_margin", r.worst_margin}, {"passed", r.passed()}};
        if (!r.counterexample.empty()) p["counterexample"] = json::parse(r.counterexample);
        props.push_back(std::move(p));
        all = all && r.passed();
    }
    return json{{"passed", all}, {"properties", props}}.dump(2);
}

}  // namespace trifound
