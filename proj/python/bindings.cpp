#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "trifound/audit.hpp"
#include "trifound/graph.hpp"
#include "trifound/sampler.hpp"
#include "trifound/theory.hpp"
#include "trifound/verify.hpp"

namespace py = pybind11;
using namespace trifound;

namespace {

py::dict fit_dict(const FitReport& r) {
    py::dict d;
    d["target_edges"] = r.target_edges;
    d["achieved_expected_edges"] = r.achieved_expected_edges;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["negatives"] = r.negatives;
    return d;
}

std::vector<std::pair<std::size_t, double>> curve_points(const TriangleFoundationCurve& c) {
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto& p : c.points) out.emplace_back(p.c, p.delta);
    return out;
}

}  // namespace

PYBIND11_MODULE(_trifound, m) {
    m.doc() = "Triangle-foundation audits of graph embeddings";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "TrifoundError", PyExc_ValueError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<Edge>& edges) { return Graph::from_edges(n, edges); }), py::arg("n"),
             py::arg("edges"))
        .def_property_readonly("num_vertices", &Graph::num_vertices)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def_property_readonly("labels", &Graph::labels)
        .def("degree", &Graph::degree)
        .def("has_edge", &Graph::has_edge)
        .def("edges", &Graph::edges)
        .def("__eq__", &Graph::operator==);

    m.def("load_edge_list", [](const std::filesystem::path& p) { return load_edge_list(p); });
    m.def("triangle_count", &triangle_count, py::arg("graph"), py::arg("threads") = 1);
    m.def(
        "triangle_foundation_curve",
        [](const Graph& g, std::size_t n_ref, unsigned threads) {
            return curve_points(triangle_foundation_curve(g, n_ref ? n_ref : g.num_vertices(), threads));
        },
        py::arg("graph"), py::arg("n_ref") = 0, py::arg("threads") = 1, "list of (c, delta) pairs");

    py::class_<Embedding>(m, "Embedding")
        .def_static("plain", [](const RowMatrix& x) { return Embedding::plain(x); })
        .def_property_readonly("vectors", &Embedding::vectors)
        .def_property_readonly("eigenvalues", &Embedding::eigenvalues)
        .def_property_readonly("spectral", [](const Embedding& e) { return e.kind() == EmbeddingKind::spectral; })
        .def("pair_score", &Embedding::pair_score);
    m.def("spectral_embed", [](const Graph& g, std::size_t d) { return spectral_embed(g, d); }, py::arg("graph"), py::arg("d"));
    m.def("reconstruct", &reconstruct);

    // Models cross the boundary as their JSON form.
    m.def(
        "fit_model",
        [](const std::string& kind, const Embedding& e, const Graph& g, std::uint64_t seed) -> py::tuple {
            FitOptions opts;
            opts.seed = seed;
            switch (parse_model_kind(kind)) {
                case ModelKind::lrdp: {
                    auto [model, report] = fit_lrdp(e, g, opts);
                    return py::make_tuple(model_to_json(model), fit_dict(report));
                }
                case ModelKind::lrhp: {
                    auto [model, report] = fit_lrhp(e, g, opts);
                    return py::make_tuple(model_to_json(model), fit_dict(report));
                }
                case ModelKind::softmax: return py::make_tuple(model_to_json(build_softmax(e, g)), py::none());
                case ModelKind::tdp: break;
            }
            return py::make_tuple(model_to_json(TdpModel{}), py::none());
        },
        py::arg("kind"), py::arg("embedding"), py::arg("graph"), py::arg("seed") = 0);
    m.def(
        "edge_probability",
        [](const std::string& model, const Embedding& e, std::size_t i, std::size_t j) {
            return edge_probability(model_from_json(model), e, i, j);
        });
    m.def("expected_degrees", [](const std::string& model, const Embedding& e) { return expected_degrees(e, model_from_json(model)); });
    m.def(
        "sample_graph",
        [](const Embedding& e, const std::string& model, std::uint64_t seed, std::uint64_t index) {
            return sample_graph(e, model_from_json(model), seed, index);
        },
        py::arg("embedding"), py::arg("model"), py::arg("seed"), py::arg("sample_index") = 0);
    m.def(
        "max_curve_over_samples",
        [](const Embedding& e, const std::string& model, std::size_t samples, std::uint64_t seed, std::size_t n_ref) {
            SampleSpec spec;
            spec.seed = seed;
            spec.num_samples = samples;
            return curve_points(max_curve_over_samples(e, model_from_json(model), spec, n_ref ? n_ref : e.num_vertices()));
        },
        py::arg("embedding"), py::arg("model"), py::arg("samples") = 100, py::arg("seed") = 0, py::arg("n_ref") = 0);

    m.def("rank_lemma_bound", &rank_lemma_bound);
    m.def(
        "theorem_rank_lower_bound",
        [](std::uint64_t n, double c, double delta, double alpha) { return theorem_rank_lower_bound({n, c, delta, alpha}); },
        py::arg("n"), py::arg("c"), py::arg("delta"), py::arg("alpha") = kAlphaCeiling);
    m.def("verify_theory", [](std::uint64_t seed) {
        VerifyOptions opts;
        opts.seed = seed;
        return theory_report_json(run_theory_checks(opts));
    }, py::arg("seed") = VerifyOptions{}.seed, "JSON report");

    m.def(
        "audit",
        [](const std::filesystem::path& graph, const std::filesystem::path& out, std::size_t dim, const std::vector<std::string>& models,
           std::size_t samples, std::uint64_t seed, unsigned threads) {
            AuditConfig cfg;
            cfg.graph_path = graph;
            cfg.output_dir = out;
            cfg.dim = dim;
            cfg.models.clear();
            for (const auto& name : models) cfg.models.push_back(parse_model_kind(name));
            cfg.num_samples = samples;
            cfg.seed = seed;
            cfg.threads = threads;
            return cmd_audit(cfg).report_json;
        },
        py::arg("graph"), py::arg("out"), py::arg("dim") = 100, py::arg("models") = std::vector<std::string>{"tdp"},
        py::arg("samples") = 100, py::arg("seed") = 0, py::arg("threads") = 1, "runs the audit and returns the report path");
}
