#include "trifound/audit.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <tuple>

#include "trifound/graph.hpp"
#include "trifound/parallel.hpp"
#include "trifound/rng.hpp"
#include "trifound/sampler.hpp"

namespace trifound {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Runs fn, rethrowing any failure tagged with its stage.
template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& ex) {
        throw StageError(name, ex.what());
    }
}

// Remembers every file written so a failed run can clean up after itself.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& f : written_) fs::remove(f, ec);
        if (created_dir_) fs::remove(dir_, ec);  // only succeeds when empty
    }

    void prepare() {
        if (!fs::exists(dir_)) {
            fs::create_directories(dir_);
            created_dir_ = true;
        } else if (!fs::is_directory(dir_)) {
            throw Error("output path " + dir_.string() + " is not a directory");
        }
    }

    template <class Writer>
    fs::path write(const std::string& name, Writer&& writer) {
        const fs::path path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open " + path.string() + " for writing");
        writer(out);
        out.flush();
        if (!out) throw Error("failed writing " + path.string());
        return path;
    }

    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool created_dir_ = false;
    bool committed_ = false;
};

json fit_json(const FitReport& r) {
    return {{"target_edges", r.target_edges},
            {"achieved_expected_edges", r.achieved_expected_edges},
            {"iterations", r.iterations},
            {"newton_iterations", r.newton_iterations},
            {"calibration_iterations", r.calibration_iterations},
            {"converged", r.converged},
            {"negatives", r.negatives},
            {"negative_weight", r.negative_weight}};
}

std::pair<EdgeModel, FitReport> build_model(ModelKind kind, const Embedding& e, const Graph& g, const AuditConfig& config) {
    FitOptions fit;
    fit.seed = substream_seed({config.seed, 0xf17, static_cast<std::uint64_t>(kind)});
    fit.negative_ratio = config.negative_ratio;
    fit.threads = config.threads;
    switch (kind) {
        case ModelKind::lrdp: return fit_lrdp(e, g, fit);
        case ModelKind::lrhp: return fit_lrhp(e, g, fit);
        case ModelKind::softmax: {
            FitReport report;
            report.target_edges = g.num_edges();
            report.converged = true;
            return {build_softmax(e, g, config.threads), report};
        }
        case ModelKind::tdp: break;
    }
    FitReport report;
    report.target_edges = g.num_edges();
    report.converged = true;
    return {TdpModel{}, report};
}

double sum_of(const std::vector<double>& values) {
    CompensatedSum s;
    for (double v : values) s.add(v);
    return s.value();
}

struct ModelRun {
    std::string name;
    EdgeModel model;
    FitReport fit;
    SampledCurves curves;
    std::vector<double> expected;
};

json curve_stats_json(const SampledCurves& s) {
    json points = json::array();
    for (std::size_t k = 0; k < s.max.points.size(); ++k)
        points.push_back({{"c", s.max.points[k].c},
                          {"max_delta", s.max.points[k].delta},
                          {"mean_delta", s.mean[k]},
                          {"variance_delta", s.variance[k]}});
    return points;
}

json config_json(const AuditConfig& config) {
    json models = json::array();
    for (auto m : config.models) models.push_back(model_name(m));
    json j = {{"graph", config.graph_path.string()},
              {"dim", config.dim},
              {"models", models},
              {"samples", config.num_samples},
              {"seed", config.seed},
              {"negative_ratio", config.negative_ratio}};
    if (config.external_embedding_path) j["embedding"] = config.external_embedding_path->string();
    if (!config.rank_sweep.empty()) j["ranks"] = config.rank_sweep;
    return j;
}

std::uint64_t sample_seed(const AuditConfig& config, std::uint64_t tag) { return substream_seed({config.seed, 0x5a3, tag}); }

}  // namespace

void validate(const AuditConfig& config) {
    if (config.graph_path.empty()) throw Error("a graph path is required");
    if (config.output_dir.empty()) throw Error("an output directory is required");
    if (config.dim < 1) throw Error("dim must be at least 1");
    if (config.num_samples < 1) throw Error("samples must be at least 1");
    if (config.models.empty()) throw Error("select at least one model");
    if (config.negative_ratio < 1) throw Error("negative ratio must be at least 1");
}

AuditReport cmd_audit(const AuditConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    stage("config", [&] { validate(config); });
    OutputSet outputs(config.output_dir);
    stage("output", [&] { outputs.prepare(); });

    const Graph g = stage("load", [&] { return load_edge_list(config.graph_path); });
    const std::size_t n = g.num_vertices();
    const Embedding e = stage("embed", [&] {
        if (config.external_embedding_path) return load_embedding(*config.external_embedding_path, g);
        if (config.dim > n) throw Error("dim " + std::to_string(config.dim) + " exceeds the vertex count " + std::to_string(n));
        return spectral_embed(g, config.dim, config.spectral);
    });

    const auto original = stage("curve:original", [&] { return triangle_foundation_curve(g, n, config.threads); });

    std::vector<ModelRun> runs;
    std::set<ModelKind> seen;
    for (ModelKind kind : config.models) {
        if (!seen.insert(kind).second) continue;
        ModelRun run;
        run.name = model_name(kind);
        std::tie(run.model, run.fit) = stage("fit:" + run.name, [&] { return build_model(kind, e, g, config); });
        run.expected = stage("degrees:" + run.name, [&] { return expected_degrees(e, run.model, config.threads); });
        run.fit.achieved_expected_edges = 0.5 * sum_of(run.expected);
        run.curves = stage("sample:" + run.name, [&] {
            SampleSpec spec;
            spec.seed = sample_seed(config, static_cast<std::uint64_t>(kind));
            spec.num_samples = config.num_samples;
            spec.threads = config.threads;
            return sample_curves(e, run.model, spec, n);
        });
        runs.push_back(std::move(run));
    }

    std::set<std::size_t> grid_set;
    for (const auto& p : original.points) grid_set.insert(p.c);
    for (const auto& run : runs)
        for (const auto& p : run.curves.max.points) grid_set.insert(p.c);
    const std::vector<std::size_t> grid(grid_set.begin(), grid_set.end());

    AuditReport report;
    json models = json::object();
    stage("write", [&] {
        report.original_curve = outputs.write("curve_original.csv", [&](std::ostream& o) { write_curve_csv(original.resampled(grid), o); });
        report.observed_degrees = outputs.write("degdist_observed.csv", [&](std::ostream& o) { write_degree_csv(degree_distribution(g), o); });
        for (const auto& run : runs) {
            report.model_curves[run.name] =
                outputs.write("curve_" + run.name + ".csv", [&](std::ostream& o) { write_curve_csv(run.curves.max.resampled(grid), o); });
            report.expected_degrees[run.name] = outputs.write("degdist_expected_" + run.name + ".csv", [&](std::ostream& o) {
                write_degree_csv(expected_degree_distribution(run.expected), o);
            });
            report.fits[run.name] = run.fit;
            json m = {{"params", json::parse(model_to_json(run.model))},
                      {"digest", model_digest(run.model)},
                      {"fit", fit_json(run.fit)},
                      {"curve", curve_stats_json(run.curves)}};
            if (const auto* sm = std::get_if<SoftmaxModel>(&run.model)) m["clamped_pairs"] = softmax_check(*sm, e, config.threads).clamped_pairs;
            models[run.name] = std::move(m);
        }
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const json doc = {{"tool", "trifound audit"},
                          {"version", kVersion},
                          {"config", config_json(config)},
                          {"graph", {{"vertices", n}, {"edges", g.num_edges()}, {"dropped_edges", g.dropped_edges()}}},
                          {"embedding", {{"kind", e.kind() == EmbeddingKind::spectral ? "spectral" : "plain"}, {"dim", e.dim()}}},
                          {"grid", grid},
                          {"models", models},
                          {"wall_seconds", report.wall_seconds}};
        report.report_json = outputs.write("report.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    });
    outputs.commit();
    return report;
}

AuditReport cmd_ranksweep(const AuditConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    stage("config", [&] {
        validate(config);
        if (config.rank_sweep.empty()) throw Error("ranksweep needs at least one rank");
        if (config.external_embedding_path) throw Error("ranksweep computes its own spectral embeddings; --embedding is not supported");
        for (std::size_t d : config.rank_sweep)
            if (d < 1) throw Error("ranks must be at least 1");
    });
    OutputSet outputs(config.output_dir);
    stage("output", [&] { outputs.prepare(); });

    const Graph g = stage("load", [&] { return load_edge_list(config.graph_path); });
    const std::size_t n = g.num_vertices();
    const std::size_t top = *std::max_element(config.rank_sweep.begin(), config.rank_sweep.end());
    const Embedding full = stage("embed", [&] {
        if (top > n) throw Error("rank " + std::to_string(top) + " exceeds the vertex count " + std::to_string(n));
        return spectral_embed(g, top, config.spectral);
    });
    const auto original = stage("curve:original", [&] { return triangle_foundation_curve(g, n, config.threads); });
    const ModelKind kind = config.models.front();

    struct RankRun {
        std::size_t d;
        FitReport fit;
        SampledCurves curves;
    };
    std::vector<RankRun> runs;
    std::set<std::size_t> ranks(config.rank_sweep.begin(), config.rank_sweep.end());
    for (std::size_t d : ranks) {
        const std::string tag = "rank_" + std::to_string(d);
        // Eigenpairs are sorted by |lambda|, so the leading d columns are the rank-d embedding.
        const Embedding e = Embedding::spectral(full.vectors().leftCols(static_cast<Eigen::Index>(d)),
                                                full.eigenvalues().head(static_cast<Eigen::Index>(d)));
        RankRun run{d, {}, {}};
        EdgeModel model;
        std::tie(model, run.fit) = stage("fit:" + tag, [&] { return build_model(kind, e, g, config); });
        run.curves = stage("sample:" + tag, [&] {
            SampleSpec spec;
            spec.seed = sample_seed(config, 0x100 + d);
            spec.num_samples = config.num_samples;
            spec.threads = config.threads;
            return sample_curves(e, model, spec, n);
        });
        runs.push_back(std::move(run));
    }

    std::set<std::size_t> grid_set;
    for (const auto& p : original.points) grid_set.insert(p.c);
    for (const auto& run : runs)
        for (const auto& p : run.curves.max.points) grid_set.insert(p.c);
    const std::vector<std::size_t> grid(grid_set.begin(), grid_set.end());

    AuditReport report;
    stage("write", [&] {
        report.original_curve = outputs.write("curve_original.csv", [&](std::ostream& o) { write_curve_csv(original.resampled(grid), o); });
        json ranks_json = json::object();
        for (const auto& run : runs) {
            const std::string tag = "rank_" + std::to_string(run.d);
            report.model_curves[tag] =
                outputs.write("curve_" + tag + ".csv", [&](std::ostream& o) { write_curve_csv(run.curves.max.resampled(grid), o); });
            report.fits[tag] = run.fit;
            ranks_json[tag] = {{"dim", run.d}, {"fit", fit_json(run.fit)}, {"curve", curve_stats_json(run.curves)}};
        }
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const json doc = {{"tool", "trifound ranksweep"},
                          {"version", kVersion},
                          {"config", config_json(config)},
                          {"model", model_name(kind)},
                          {"graph", {{"vertices", n}, {"edges", g.num_edges()}, {"dropped_edges", g.dropped_edges()}}},
                          {"grid", grid},
                          {"ranks", ranks_json},
                          {"wall_seconds", report.wall_seconds}};
        report.report_json = outputs.write("report.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    });
    outputs.commit();
    return report;
}

}  // namespace trifound
