#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "trifound/audit.hpp"
#include "trifound/graph.hpp"
#include "trifound/rng.hpp"
#include "trifound/sampler.hpp"
#include "trifound/verify.hpp"

using namespace trifound;

namespace {

std::vector<ModelKind> parse_models(const std::string& list) {
    std::vector<ModelKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_model_kind(item));
    return out;
}

void add_common(CLI::App* cmd, AuditConfig& cfg, std::string& models) {
    cmd->add_option("--graph", cfg.graph_path, "edge list file")->required();
    cmd->add_option("--dim", cfg.dim, "embedding dimension")->capture_default_str();
    cmd->add_option("--models", models, "comma-separated subset of tdp,lrdp,lrhp,softmax")->capture_default_str();
    cmd->add_option("--samples", cfg.num_samples, "samples per model")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    cmd->add_option("--negative-ratio", cfg.negative_ratio, "sampled non-edges per edge when fitting")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triangle-foundation audits of graph embeddings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    AuditConfig cfg;
    std::string models = "tdp";
    std::string embedding_path;

    auto* audit = app.add_subcommand("audit", "compare triangle curves of a graph and its embedding models");
    add_common(audit, cfg, models);
    audit->add_option("--out", cfg.output_dir, "output directory")->required();
    audit->add_option("--embedding", embedding_path, "external embedding (plain vectors keyed by vertex id)");

    auto* sweep = app.add_subcommand("ranksweep", "TDP curves for several spectral ranks");
    add_common(sweep, cfg, models);
    sweep->add_option("--out", cfg.output_dir, "output directory")->required();
    sweep->add_option("--ranks", cfg.rank_sweep, "comma-separated ranks")->delimiter(',')->required();

    std::string report_path;
    auto* verify = app.add_subcommand("verify-theory", "randomized checks of the rank lower-bound ingredients");
    VerifyOptions vopts;
    verify->add_option("--seed", vopts.seed, "base seed")->capture_default_str();
    verify->add_option("--threads", vopts.threads, "worker threads (0 = all cores)")->capture_default_str();
    verify->add_option("--out", report_path, "write the JSON report here instead of stdout");

    std::string out_path;
    auto* embed = app.add_subcommand("embed", "write the spectral embedding of a graph");
    embed->add_option("--graph", cfg.graph_path, "edge list file")->required();
    embed->add_option("--dim", cfg.dim, "embedding dimension")->capture_default_str();
    embed->add_option("--out", out_path, "embedding file")->required();

    auto* sample = app.add_subcommand("sample", "draw graphs from a fitted model");
    add_common(sample, cfg, models);
    sample->add_option("--out", cfg.output_dir, "output directory")->required();
    sample->add_option("--embedding", embedding_path, "external embedding");

    auto* curve = app.add_subcommand("curve", "triangle foundation curve of a graph");
    curve->add_option("--graph", cfg.graph_path, "edge list file")->required();
    curve->add_option("--out", out_path, "CSV file (stdout when omitted)");
    curve->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.models = parse_models(models);
        if (!embedding_path.empty()) cfg.external_embedding_path = embedding_path;

        if (*audit) {
            const auto report = cmd_audit(cfg);
            std::cout << "wrote " << report.report_json.string() << " (" << report.wall_seconds << " s)\n";
        } else if (*sweep) {
            const auto report = cmd_ranksweep(cfg);
            std::cout << "wrote " << report.report_json.string() << " (" << report.wall_seconds << " s)\n";
        } else if (*verify) {
            const auto results = run_theory_checks(vopts);
            const std::string json = theory_report_json(results);
            if (report_path.empty()) {
                std::cout << json << '\n';
            } else {
                std::ofstream(report_path) << json << '\n';
            }
            bool ok = true;
            for (const auto& r : results) {
                std::cerr << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.trials << " trials, worst margin " << r.worst_margin << ")\n";
                ok = ok && r.passed();
            }
            return ok ? 0 : 1;
        } else if (*embed) {
            const Graph g = load_edge_list(cfg.graph_path);
            const Embedding e = spectral_embed(g, cfg.dim);
            // Rows are keyed by the graph's original labels.
            RowMatrix rows = e.vectors();
            std::ofstream out(out_path);
            if (!out) throw Error("cannot open " + out_path);
            out << g.num_vertices() << ' ' << e.dim() << " spectral\nlambda:";
            char buf[32];
            for (Eigen::Index r = 0; r < e.eigenvalues().size(); ++r) {
                std::snprintf(buf, sizeof buf, " %.17g", e.eigenvalues()[r]);
                out << buf;
            }
            out << '\n';
            for (std::size_t i = 0; i < g.num_vertices(); ++i) {
                out << g.labels()[i];
                for (Eigen::Index r = 0; r < rows.cols(); ++r) {
                    std::snprintf(buf, sizeof buf, " %.17g", rows(static_cast<Eigen::Index>(i), r));
                    out << buf;
                }
                out << '\n';
            }
        } else if (*sample) {
            validate(cfg);
            const Graph g = load_edge_list(cfg.graph_path);
            const Embedding e = cfg.external_embedding_path ? load_embedding(*cfg.external_embedding_path, g) : spectral_embed(g, cfg.dim);
            std::filesystem::create_directories(cfg.output_dir);
            for (ModelKind kind : cfg.models) {
                FitOptions fit;
                fit.seed = substream_seed({cfg.seed, 0xf17, static_cast<std::uint64_t>(kind)});
                fit.negative_ratio = cfg.negative_ratio;
                fit.threads = cfg.threads;
                EdgeModel model = TdpModel{};
                if (kind == ModelKind::lrdp) model = fit_lrdp(e, g, fit).first;
                if (kind == ModelKind::lrhp) model = fit_lrhp(e, g, fit).first;
                if (kind == ModelKind::softmax) model = build_softmax(e, g, cfg.threads);
                const std::string digest = model_digest(model);
                const GraphSampler sampler(e, model, 1 << 16, cfg.threads);
                const std::uint64_t seed = substream_seed({cfg.seed, 0x5a3, static_cast<std::uint64_t>(kind)});
                for (std::size_t s = 0; s < cfg.num_samples; ++s) {
                    const Graph drawn = sampler.sample(seed, s).with_labels(g.labels());
                    const std::vector<std::string> header{"model " + model_name(kind), "model_digest " + digest,
                                                          "seed " + std::to_string(seed), "sample " + std::to_string(s)};
                    std::ofstream out(cfg.output_dir / ("sample_" + model_name(kind) + "_" + std::to_string(s) + ".txt"));
                    write_edge_list(drawn, out, header);
                }
            }
        } else if (*curve) {
            const Graph g = load_edge_list(cfg.graph_path);
            const auto c = triangle_foundation_curve(g, g.num_vertices(), cfg.threads);
            if (out_path.empty()) {
                write_curve_csv(c, std::cout);
            } else {
                std::ofstream out(out_path);
                write_curve_csv(c, out);
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
