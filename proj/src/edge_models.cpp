#include "trifound/edge_models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "trifound/error.hpp"
#include "trifound/pairs.hpp"
#include "trifound/parallel.hpp"
#include "trifound/rng.hpp"

namespace trifound {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::size_t kPairsPerBlock = 1 << 16;
// Linear predictors are cached for calibration up to this many pairs.
constexpr std::size_t kPredictorCachePairs = std::size_t{1} << 24;

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

double LrdpModel::x0() const { return k == 0.0 ? std::numeric_limits<double>::quiet_NaN() : -intercept / k; }

ModelKind model_kind(const EdgeModel& model) { return static_cast<ModelKind>(model.index()); }

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::tdp: return "tdp";
        case ModelKind::lrdp: return "lrdp";
        case ModelKind::lrhp: return "lrhp";
        case ModelKind::softmax: return "softmax";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "tdp") return ModelKind::tdp;
    if (name == "lrdp") return ModelKind::lrdp;
    if (name == "lrhp") return ModelKind::lrhp;
    if (name == "softmax") return ModelKind::softmax;
    throw Error("unknown model '" + std::string(name) + "' (expected tdp, lrdp, lrhp or softmax)");
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double z = std::exp(x);
    return z / (1.0 + z);
}

double tdp_probability(double score) {
    if (!std::isfinite(score)) throw Error("non-finite pair score");
    return std::clamp(score, 0.0, 1.0);
}

Eigen::VectorXd model_score_weights(const EdgeModel& model, const Embedding& e) {
    if (const auto* lrhp = std::get_if<LrhpModel>(&model)) {
        if (static_cast<std::size_t>(lrhp->weights.size()) != e.dim()) throw Error("LRHP weight count does not match embedding dimension");
        return lrhp->weights.cwiseProduct(e.score_weights());
    }
    if (const auto* softmax = std::get_if<SoftmaxModel>(&model)) {
        if (static_cast<std::size_t>(softmax->scale.size()) != e.num_vertices())
            throw Error("softmax model was built for a different vertex count");
    }
    return e.score_weights();
}

double apply_link(const EdgeModel& model, double score, std::size_t i, std::size_t j) {
    return std::visit(overloaded{
                          [&](const TdpModel&) { return std::clamp(score, 0.0, 1.0); },
                          [&](const LrdpModel& m) { return m.ceiling * sigmoid(m.k * score + m.intercept); },
                          [&](const LrhpModel& m) { return sigmoid(score + m.intercept); },
                          [&](const SoftmaxModel& m) {
                              const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
                              const double q_ij = m.scale[a] * std::exp(score - m.shift[a]);
                              const double q_ji = m.scale[b] * std::exp(score - m.shift[b]);
                              return std::min(1.0, 0.5 * (q_ij + q_ji));
                          },
                      },
                      model);
}

double edge_probability(const EdgeModel& model, const Embedding& e, std::size_t i, std::size_t j) {
    if (i >= e.num_vertices() || j >= e.num_vertices()) throw std::out_of_range("edge_probability: vertex index out of range");
    if (i == j) throw std::invalid_argument("edge_probability: self-pairs are excluded");
    if (std::holds_alternative<TdpModel>(model)) return tdp_probability(e.pair_score(i, j));
    const Eigen::VectorXd weights = model_score_weights(model, e);
    return apply_link(model, weighted_dot(e.vectors(), weights, i, j), i, j);
}

// ---------------------------------------------------------------------------
// Logistic fitting

namespace {

struct PairSample {
    Vertex i;
    Vertex j;
    double y;
    double weight;
};

struct TrainingSet {
    std::vector<PairSample> rows;
    std::size_t negatives = 0;
    double negative_weight = 0.0;
};

// All edges as positives; negative_ratio * m uniformly drawn non-edges with
// weight N_nonedge / draws, or every non-edge at weight 1 when there are
// fewer than that.
TrainingSet training_set(const Graph& g, std::size_t negative_ratio, std::uint64_t seed) {
    const std::size_t n = g.num_vertices();
    const std::size_t m = g.num_edges();
    const std::size_t all_pairs = n * (n - 1) / 2;
    const std::size_t non_edges = all_pairs - m;
    TrainingSet set;
    for (auto [u, v] : g.edges()) set.rows.push_back({u, v, 1.0, 1.0});
    const std::size_t draws = negative_ratio * m;
    if (non_edges <= draws) {
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (!g.has_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
                    set.rows.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), 0.0, 1.0});
        set.negatives = non_edges;
        set.negative_weight = 1.0;
        return set;
    }
    Rng rng({seed, 0x6e656761ULL});
    const double weight = static_cast<double>(non_edges) / static_cast<double>(draws);
    for (std::size_t k = 0; k < draws;) {
        const auto u = static_cast<Vertex>(rng.below(n));
        const auto v = static_cast<Vertex>(rng.below(n));
        if (u == v || g.has_edge(u, v)) continue;
        set.rows.push_back({std::min(u, v), std::max(u, v), 0.0, weight});
        ++k;
    }
    set.negatives = draws;
    set.negative_weight = weight;
    return set;
}

// Feature rows for a chunk of training pairs.
using FeatureFn = void (*)(const Embedding&, const PairSample&, double*);

void dot_feature(const Embedding& e, const PairSample& s, double* out) { out[0] = e.pair_score(s.i, s.j); }

void hadamard_features(const Embedding& e, const PairSample& s, double* out) {
    const auto& x = e.vectors();
    const auto& w = e.score_weights();
    for (Eigen::Index r = 0; r < x.cols(); ++r) out[r] = w[r] * (x(s.i, r) * x(s.j, r));
}

struct LogisticFit {
    double intercept = 0.0;
    Eigen::VectorXd slopes;
    std::size_t iterations = 0;
};

// Weighted logistic maximum likelihood by damped Newton on standardized
// features. A ridge of 1e-8 * total weight on the slopes keeps the optimum
// finite under perfect separation; constant features get slope 0.
LogisticFit logistic_regression(const Embedding& e, const TrainingSet& data, std::size_t features, FeatureFn feature_fn,
                                std::size_t max_iterations) {
    constexpr std::size_t kChunk = 4096;
    const std::size_t rows = data.rows.size();
    const auto p = static_cast<Eigen::Index>(features);

    auto fill_chunk = [&](std::size_t begin, std::size_t end, RowMatrix& z) {
        z.resize(static_cast<Eigen::Index>(end - begin), p);
        for (std::size_t r = begin; r < end; ++r) feature_fn(e, data.rows[r], z.row(static_cast<Eigen::Index>(r - begin)).data());
    };

    // Weighted column statistics.
    double total_weight = 0.0, positive_weight = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p), sq = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
    Eigen::VectorXd hi = -lo;
    RowMatrix z;
    for (std::size_t begin = 0; begin < rows; begin += kChunk) {
        const std::size_t end = std::min(rows, begin + kChunk);
        fill_chunk(begin, end, z);
        for (std::size_t r = begin; r < end; ++r) {
            const auto& s = data.rows[r];
            const auto row = z.row(static_cast<Eigen::Index>(r - begin)).transpose();
            total_weight += s.weight;
            positive_weight += s.weight * s.y;
            mean += s.weight * row;
            lo = lo.cwiseMin(row);
            hi = hi.cwiseMax(row);
        }
    }
    mean /= total_weight;
    for (std::size_t begin = 0; begin < rows; begin += kChunk) {
        const std::size_t end = std::min(rows, begin + kChunk);
        fill_chunk(begin, end, z);
        for (std::size_t r = begin; r < end; ++r)
            sq += data.rows[r].weight * (z.row(static_cast<Eigen::Index>(r - begin)).transpose() - mean).cwiseAbs2();
    }
    Eigen::VectorXd scale = (sq / total_weight).cwiseSqrt();
    std::vector<bool> active(features);
    for (Eigen::Index c = 0; c < p; ++c) {
        active[static_cast<std::size_t>(c)] = hi[c] > lo[c] && scale[c] > 1e-300;
        if (!active[static_cast<std::size_t>(c)]) scale[c] = 1.0;
    }

    const double ridge = 1e-8 * total_weight;
    // beta[0] is the intercept of the standardized problem.
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
    const double frac = std::clamp(positive_weight / total_weight, 1e-12, 1.0 - 1e-12);
    beta[0] = std::log(frac / (1.0 - frac));

    auto standardized = [&](std::size_t begin, std::size_t end, RowMatrix& zs) {
        fill_chunk(begin, end, z);
        zs.resize(z.rows(), p + 1);
        zs.col(0).setOnes();
        for (Eigen::Index c = 0; c < p; ++c)
            zs.col(c + 1) = active[static_cast<std::size_t>(c)] ? Eigen::VectorXd((z.col(c).array() - mean[c]) / scale[c])
                                                                : Eigen::VectorXd::Zero(z.rows());
    };
    auto objective = [&](const Eigen::VectorXd& b) {
        CompensatedSum loglik;
        RowMatrix zs;
        for (std::size_t begin = 0; begin < rows; begin += kChunk) {
            const std::size_t end = std::min(rows, begin + kChunk);
            standardized(begin, end, zs);
            const Eigen::VectorXd eta = zs * b;
            for (std::size_t r = begin; r < end; ++r) {
                const auto& s = data.rows[r];
                const double t = eta[static_cast<Eigen::Index>(r - begin)];
                loglik.add(-s.weight * (s.y > 0 ? softplus(-t) : softplus(t)));
            }
        }
        return loglik.value() - 0.5 * ridge * b.tail(p).squaredNorm();
    };

    LogisticFit fit;
    double current = objective(beta);
    RowMatrix zs;
    for (;;) {
        if (fit.iterations >= max_iterations)
            throw ConvergenceError("logistic fit did not converge in " + std::to_string(max_iterations) + " Newton iterations");
        ++fit.iterations;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(p + 1);
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(p + 1, p + 1);
        for (std::size_t begin = 0; begin < rows; begin += kChunk) {
            const std::size_t end = std::min(rows, begin + kChunk);
            standardized(begin, end, zs);
            const Eigen::VectorXd eta = zs * beta;
            Eigen::VectorXd resid(eta.size()), curv(eta.size());
            for (Eigen::Index r = 0; r < eta.size(); ++r) {
                const auto& s = data.rows[begin + static_cast<std::size_t>(r)];
                const double mu = sigmoid(eta[r]);
                resid[r] = s.weight * (s.y - mu);
                curv[r] = s.weight * mu * (1.0 - mu);
            }
            grad.noalias() += zs.transpose() * resid;
            hess.noalias() += zs.transpose() * curv.asDiagonal() * zs;
        }
        grad.tail(p) -= ridge * beta.tail(p);
        hess.diagonal().tail(p).array() += ridge;
        for (Eigen::Index c = 0; c < p; ++c)
            if (!active[static_cast<std::size_t>(c)]) {
                grad[c + 1] = 0.0;
                hess.row(c + 1).setZero();
                hess.col(c + 1).setZero();
                hess(c + 1, c + 1) = 1.0;
            }
        const Eigen::VectorXd step = hess.ldlt().solve(grad);
        if (!step.allFinite()) throw ConvergenceError("logistic fit produced a singular Newton system");
        double t = 1.0;
        double next = objective(beta + step);
        for (int halvings = 0; next < current && halvings < 40; ++halvings) {
            t *= 0.5;
            next = objective(beta + t * step);
        }
        if (next < current) break;  // no ascent direction left at double precision
        beta += t * step;
        const bool small_step = (t * step).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + beta.lpNorm<Eigen::Infinity>());
        const bool flat = next - current <= 1e-15 * std::abs(current);
        current = next;
        if (small_step || flat) break;
    }

    fit.slopes = Eigen::VectorXd::Zero(p);
    fit.intercept = beta[0];
    for (Eigen::Index c = 0; c < p; ++c) {
        if (!active[static_cast<std::size_t>(c)]) continue;
        fit.slopes[c] = beta[c + 1] / scale[c];
        fit.intercept -= fit.slopes[c] * mean[c];
    }
    return fit;
}

struct Calibration {
    double intercept = 0.0;
    double expected_edges = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Finds the intercept shift whose exact expected edge count
// sum_{i<j} ceiling * sigmoid(eta_ij + shift) equals the target. The sum is
// strictly increasing in the shift, so bracketing plus bisection is exact up
// to rounding.
Calibration calibrate_intercept(const Embedding& e, const Eigen::VectorXd& score_weights, double slope, double start,
                                double ceiling, double target, const FitOptions& options) {
    const std::size_t n = e.num_vertices();
    const auto blocks = row_blocks(n, kPairsPerBlock);
    const std::size_t pairs = n * (n - 1) / 2;
    const bool cached = pairs <= kPredictorCachePairs;

    // Upper triangle of slope * score, block by block.
    std::vector<std::vector<double>> cache(cached ? blocks.size() : 0);
    auto block_predictors = [&](std::size_t b, std::vector<double>& out) {
        RowMatrix strip;
        score_strip(e, score_weights, blocks[b], strip);
        out.clear();
        for (std::size_t i = blocks[b].begin; i < blocks[b].end; ++i)
            for (std::size_t j = i + 1; j < n; ++j) out.push_back(slope * strip(static_cast<Eigen::Index>(i - blocks[b].begin), static_cast<Eigen::Index>(j)));
    };
    if (cached) parallel_for(blocks.size(), options.threads, [&](std::size_t b) { block_predictors(b, cache[b]); });

    auto expected = [&](double intercept) {
        std::vector<CompensatedSum> partial(blocks.size());
        parallel_for(blocks.size(), options.threads, [&](std::size_t b) {
            std::vector<double> local;
            const std::vector<double>* eta = &local;
            if (cached) eta = &cache[b];
            else block_predictors(b, local);
            for (double t : *eta) partial[b].add(ceiling * sigmoid(t + intercept));
        });
        CompensatedSum total;
        for (const auto& s : partial) total.add(s);
        return total.value();
    };

    constexpr double kTight = 1e-10;
    Calibration cal;
    auto close_enough = [&](double value) { return std::abs(value - target) <= kTight * target; };
    double lo = start - 1.0, hi = start + 1.0;
    double f_lo = expected(lo), f_hi = expected(hi);
    cal.iterations += 2;
    for (int k = 0; k < 64 && f_lo > target; ++k) {
        lo -= (hi - lo);
        f_lo = expected(lo);
        ++cal.iterations;
    }
    for (int k = 0; k < 64 && f_hi < target && !close_enough(f_hi); ++k) {
        hi += (hi - lo);
        f_hi = expected(hi);
        ++cal.iterations;
    }
    double best = std::abs(f_lo - target) < std::abs(f_hi - target) ? lo : hi;
    double best_value = best == lo ? f_lo : f_hi;
    if (f_lo <= target && f_hi >= target) {
        for (std::size_t it = 0; it < options.max_calibration_iterations && !close_enough(best_value); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            const double f_mid = expected(mid);
            ++cal.iterations;
            if (std::abs(f_mid - target) < std::abs(best_value - target)) {
                best = mid;
                best_value = f_mid;
            }
            if (f_mid < target) lo = mid;
            else hi = mid;
        }
    }
    cal.intercept = best;
    cal.expected_edges = best_value;
    cal.converged = std::abs(best_value - target) <= options.calibration_tol * target;
    return cal;
}

void check_fit_inputs(const Embedding& e, const Graph& g, const FitOptions& options) {
    if (e.num_vertices() != g.num_vertices()) throw Error("embedding and graph have different vertex counts");
    if (options.negative_ratio < 1) throw Error("negative_ratio must be at least 1");
    if (g.num_edges() == 0) throw Error("cannot fit an edge model to a graph without edges");
    if (g.num_vertices() < 2) throw Error("graph needs at least two vertices");
}

}  // namespace

std::pair<EdgeModel, FitReport> fit_lrdp(const Embedding& e, const Graph& g, const FitOptions& options) {
    check_fit_inputs(e, g, options);
    const TrainingSet data = training_set(g, options.negative_ratio, options.seed);
    const LogisticFit fit = logistic_regression(e, data, 1, dot_feature, options.max_newton_iterations);
    LrdpModel model;
    model.k = fit.slopes[0];
    model.ceiling = 1.0;
    const auto target = static_cast<double>(g.num_edges());
    const Calibration cal = calibrate_intercept(e, e.score_weights(), model.k, fit.intercept, model.ceiling, target, options);
    model.intercept = cal.intercept;

    FitReport report;
    report.target_edges = g.num_edges();
    report.achieved_expected_edges = cal.expected_edges;
    report.newton_iterations = fit.iterations;
    report.calibration_iterations = cal.iterations;
    report.iterations = fit.iterations + cal.iterations;
    report.converged = cal.converged;
    report.negatives = data.negatives;
    report.negative_weight = data.negative_weight;
    return {model, report};
}

std::pair<EdgeModel, FitReport> fit_lrhp(const Embedding& e, const Graph& g, const FitOptions& options) {
    check_fit_inputs(e, g, options);
    const TrainingSet data = training_set(g, options.negative_ratio, options.seed);
    const LogisticFit fit = logistic_regression(e, data, e.dim(), hadamard_features, options.max_newton_iterations);
    LrhpModel model;
    model.weights = fit.slopes;
    const auto target = static_cast<double>(g.num_edges());
    const Eigen::VectorXd weights = model.weights.cwiseProduct(e.score_weights());
    const Calibration cal = calibrate_intercept(e, weights, 1.0, fit.intercept, 1.0, target, options);
    model.intercept = cal.intercept;

    FitReport report;
    report.target_edges = g.num_edges();
    report.achieved_expected_edges = cal.expected_edges;
    report.newton_iterations = fit.iterations;
    report.calibration_iterations = cal.iterations;
    report.iterations = fit.iterations + cal.iterations;
    report.converged = cal.converged;
    report.negatives = data.negatives;
    report.negative_weight = data.negative_weight;
    return {model, report};
}

// ---------------------------------------------------------------------------
// Softmax

EdgeModel build_softmax(const Embedding& e, const Graph& g, unsigned threads) {
    if (e.num_vertices() != g.num_vertices()) throw Error("embedding and graph have different vertex counts");
    const std::size_t n = e.num_vertices();
    SoftmaxModel model;
    model.scale = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    model.shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const auto blocks = row_blocks(n, kPairsPerBlock);
    parallel_for(blocks.size(), threads, [&](std::size_t b) {
        RowMatrix strip;
        score_strip(e, e.score_weights(), blocks[b], strip);
        for (std::size_t i = blocks[b].begin; i < blocks[b].end; ++i) {
            const auto row = strip.row(static_cast<Eigen::Index>(i - blocks[b].begin));
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k)
                if (k != i) top = std::max(top, row[static_cast<Eigen::Index>(k)]);
            CompensatedSum z;
            for (std::size_t k = 0; k < n; ++k)
                if (k != i) z.add(std::exp(row[static_cast<Eigen::Index>(k)] - top));
            const auto idx = static_cast<Eigen::Index>(i);
            model.shift[idx] = std::isfinite(top) ? top : 0.0;
            const double deg = static_cast<double>(g.degree(static_cast<Vertex>(i)));
            model.scale[idx] = z.value() > 0 ? deg / z.value() : 0.0;
        }
    });
    return model;
}

SoftmaxCheck softmax_check(const SoftmaxModel& model, const Embedding& e, unsigned threads) {
    const std::size_t n = e.num_vertices();
    if (static_cast<std::size_t>(model.scale.size()) != n) throw Error("softmax model was built for a different vertex count");
    SoftmaxCheck check;
    check.row_sums.assign(n, 0.0);
    const auto blocks = row_blocks(n, kPairsPerBlock);
    std::vector<std::size_t> clamped(blocks.size(), 0);
    parallel_for(blocks.size(), threads, [&](std::size_t b) {
        RowMatrix strip;
        score_strip(e, e.score_weights(), blocks[b], strip);
        for (std::size_t i = blocks[b].begin; i < blocks[b].end; ++i) {
            const auto r = static_cast<Eigen::Index>(i - blocks[b].begin);
            const auto a = static_cast<Eigen::Index>(i);
            CompensatedSum sum;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double s = strip(r, static_cast<Eigen::Index>(j));
                const double q_ij = model.scale[a] * std::exp(s - model.shift[a]);
                sum.add(q_ij);
                if (j > i) {
                    const double q_ji = model.scale[static_cast<Eigen::Index>(j)] * std::exp(s - model.shift[static_cast<Eigen::Index>(j)]);
                    if (0.5 * (q_ij + q_ji) > 1.0) ++clamped[b];
                }
            }
            check.row_sums[i] = sum.value();
        }
    });
    for (std::size_t c : clamped) check.clamped_pairs += c;
    return check;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const nlohmann::json& arr) {
    const auto values = arr.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string model_to_json(const EdgeModel& model) {
    nlohmann::json j;
    j["variant"] = model_name(model_kind(model));
    std::visit(overloaded{
                   [&](const TdpModel&) {},
                   [&](const LrdpModel& m) {
                       j["k"] = m.k;
                       j["intercept"] = m.intercept;
                       j["L"] = m.ceiling;
                       j["x0"] = m.k == 0.0 ? nlohmann::json(nullptr) : nlohmann::json(m.x0());
                   },
                   [&](const LrhpModel& m) {
                       j["weights"] = to_std(m.weights);
                       j["intercept"] = m.intercept;
                   },
                   [&](const SoftmaxModel& m) {
                       j["scale"] = to_std(m.scale);
                       j["shift"] = to_std(m.shift);
                   },
               },
               model);
    return j.dump();
}

EdgeModel model_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        switch (parse_model_kind(j.at("variant").get<std::string>())) {
            case ModelKind::tdp: return TdpModel{};
            case ModelKind::lrdp: {
                LrdpModel m;
                m.k = j.at("k").get<double>();
                m.intercept = j.at("intercept").get<double>();
                m.ceiling = j.value("L", 1.0);
                if (!(m.ceiling > 0.0 && m.ceiling <= 1.0)) throw Error("LRDP ceiling L must lie in (0, 1]");
                return m;
            }
            case ModelKind::lrhp: {
                LrhpModel m;
                m.weights = to_eigen(j.at("weights"));
                m.intercept = j.at("intercept").get<double>();
                if (!m.weights.allFinite()) throw Error("LRHP weights must be finite");
                return m;
            }
            case ModelKind::softmax: {
                SoftmaxModel m;
                m.scale = to_eigen(j.at("scale"));
                m.shift = to_eigen(j.at("shift"));
                if (m.scale.size() != m.shift.size()) throw Error("softmax scale and shift lengths differ");
                if ((m.scale.array() < 0.0).any()) throw Error("softmax scales must be non-negative");
                return m;
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("invalid model JSON: ") + ex.what(), 0);
    }
    throw Error("unreachable model variant");
}

std::string model_digest(const EdgeModel& model) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : model_to_json(model)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace trifound
