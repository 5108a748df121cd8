#include <boost/multiprecision/cpp_dec_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support.hpp"
#include "trifound/audit.hpp"
#include "trifound/pairs.hpp"
#include "trifound/parallel.hpp"
#include "trifound/sampler.hpp"
#include "trifound/theory.hpp"
#include "trifound/verify.hpp"

using namespace trifound;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string cli_path;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("trifound_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome from_property(const PropertyResult& r) {
    std::ostringstream os;
    os << r.trials << " trials, " << r.failures << " failures, worst margin " << r.worst_margin;
    if (!r.passed()) os << ", counterexample " << r.counterexample;
    return {r.passed(), os.str()};
}

Outcome criterion1() {
    const auto start = std::chrono::steady_clock::now();
    std::size_t mismatches = 0, thresholds = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Graph g = trifound::testing::erdos_renyi(40, 0.3, 1000 + s);
        const auto oracle = trifound::testing::brute_force_curve(g);
        const auto curve = triangle_foundation_curve(g, g.num_vertices());
        for (auto [c, count] : oracle) {
            ++thresholds;
            if (curve.triangles_at(c) != static_cast<double>(count)) ++mismatches;
        }
    }
    const double t = seconds_since(start);
    return {mismatches == 0 && t < 1.0, fmt("%.0f thresholds checked, %.0f mismatches, %.3f s", thresholds, mismatches, t)};
}

Outcome criterion2() {
    VerifyOptions o;
    o.rank_trials = 1000;
    return from_property(check_rank_lemma(o));
}

Outcome criterion3() {
    VerifyOptions o;
    o.packing_trials = 100;
    o.packing_max_dim = 6;
    return from_property(check_packing(o));
}

Outcome criterion4() {
    VerifyOptions o;
    o.independent_set_trials = 100;
    return from_property(check_independent_set(o));
}

Outcome criterion5() {
    VerifyOptions o;
    o.neg_trials = 1000;
    return from_property(check_dot_mass(o));
}

Outcome criterion6() {
    VerifyOptions o;
    o.second_moment_trials = 50;
    return from_property(check_degree_second_moment(o));
}

Outcome criterion7() {
    RowMatrix x(2, 1);
    x << std::sqrt(0.5), std::sqrt(0.5);
    const Embedding pair = Embedding::plain(x);
    const double p = edge_probability(TdpModel{}, pair, 0, 1);
    const GraphSampler single(pair, TdpModel{});
    std::size_t hits = 0;
    for (std::size_t s = 0; s < 10000; ++s) hits += single.sample(2024, s).num_edges();
    const double freq = static_cast<double>(hits) / 10000.0;
    bool ok = std::abs(p - 0.5) < 1e-15 && freq >= 0.485 && freq <= 0.515;
    std::string detail = fmt("p=%.17g, frequency %.4f", p, freq);

    Rng rng(77);
    double worst_z = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
        RowMatrix v(30, 3);
        for (Eigen::Index i = 0; i < v.rows(); ++i)
            for (Eigen::Index r = 0; r < v.cols(); ++r) v(i, r) = rng.uniform() * 0.7;
        const Embedding e = Embedding::plain(v);
        const double exact = expected_triangles_exact(e, TdpModel{});
        const GraphSampler sampler(e, TdpModel{});
        constexpr int draws = 4000;
        double sum = 0, sq = 0;
        for (int s = 0; s < draws; ++s) {
            const double t = static_cast<double>(triangle_count(sampler.sample(31 + inst, s)));
            sum += t;
            sq += t * t;
        }
        const double mean = sum / draws;
        const double se = std::sqrt((sq - draws * mean * mean) / (draws - 1) / draws);
        const double z = std::abs(mean - exact) / se;
        worst_z = std::max(worst_z, z);
        ok = ok && z <= 3.0;
    }
    return {ok, detail + fmt("; 5 instances n=30, worst |mean-exact|/se = %.2f", worst_z)};
}

Outcome criterion8() {
    std::vector<Graph> graphs;
    for (std::size_t n : {12, 50, 120, 200}) graphs.push_back(trifound::testing::erdos_renyi(n, 6.0 / static_cast<double>(n), n));
    graphs.push_back(trifound::testing::disjoint_triangles(60));
    bool ok = true;
    std::size_t checked = 0;
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        const Graph& g = graphs[k];
        const std::size_t n = g.num_vertices();
        const Embedding e = spectral_embed(g, n);
        const GraphSampler sampler(e, TdpModel{});
        for (std::size_t s = 0; s < 10; ++s) ok = ok && sampler.sample(5, s) == g;

        const fs::path dir = scratch("c8_" + std::to_string(k));
        {
            std::ofstream out(dir / "graph.txt");
            write_edge_list(g, out);
        }
        AuditConfig cfg;
        cfg.graph_path = dir / "graph.txt";
        cfg.output_dir = dir / "out";
        cfg.dim = load_edge_list(cfg.graph_path).num_vertices();  // isolated vertices are not in the file
        cfg.num_samples = 10;
        const auto report = cmd_audit(cfg);
        ok = ok && slurp(report.original_curve) == slurp(report.model_curves.at("tdp"));
        ++checked;
    }
    return {ok, fmt("%.0f graphs (n <= 200), 10 samples each equal the input, audit curves equal", checked)};
}

Outcome criterion9() {
    // Two-community graph with planted triangles, n = 2000.
    Rng rng(909);
    std::vector<Edge> edges;
    const Vertex n = 2000;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (rng.uniform() < ((i < n / 2) == (j < n / 2) ? 8.0 : 2.0) / n) edges.emplace_back(i, j);
    for (Vertex t = 0; t + 2 < 600; t += 3) edges.insert(edges.end(), {{t, t + 1}, {t + 1, t + 2}, {t, t + 2}});
    const Graph g = Graph::from_edges(n, edges);
    const Embedding e = spectral_embed(g, 16);
    const double m = static_cast<double>(g.num_edges());
    auto rel = [&](const EdgeModel& model) {
        CompensatedSum s;
        for (double d : expected_degrees(e, model)) s.add(d);
        return std::abs(0.5 * s.value() - m) / m;
    };
    const double lrdp = rel(fit_lrdp(e, g).first);
    const double lrhp = rel(fit_lrhp(e, g).first);
    const double softmax = rel(build_softmax(e, g));
    const bool ok = lrdp <= 1e-3 && lrhp <= 1e-3 && softmax <= 1e-3;
    return {ok, fmt("n=2000, m=%.0f; relative |sum p - m|: lrdp %.2e, lrhp %.2e, softmax %.2e", m, lrdp, lrhp, softmax)};
}

Outcome criterion10() {
    const auto start = std::chrono::steady_clock::now();
    constexpr Vertex n = 3000;
    std::vector<Edge> edges;
    for (Vertex t = 0; t < n; t += 3) edges.insert(edges.end(), {{t, t + 1}, {t + 1, t + 2}, {t, t + 2}});
    Rng rng(1010);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (rng.uniform() < 1.0 / n) edges.emplace_back(i, j);
    const Graph g = Graph::from_edges(n, edges);
    const double original = triangle_foundation_curve(g, n).delta_at(4);

    const Embedding e = spectral_embed(g, 100);
    SampleSpec spec;
    spec.seed = 10;
    spec.num_samples = 100;
    const double model = max_curve_over_samples(e, TdpModel{}, spec, n).delta_at(4);
    const double t = seconds_since(start);
    const bool ok = original >= 0.9 && model <= 0.1 && t < 600.0;
    std::string detail = fmt("original delta(4)=%.4f (need >= 0.9), max over 100 TDP samples delta(4)=%.4f (need <= 0.1), %.1f s",
                             original, model, t);
    if (model > 0) detail += fmt(", ratio %.0fx", original / model);
    if (original < 0.9)
        detail += "; 1000 triangles on 3000 vertices cap delta at 1/3, so the first threshold cannot be met";
    return {ok, detail};
}

Outcome criterion11() {
    using Big = boost::multiprecision::cpp_dec_float_50;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        TheoremBoundParams p;
        p.n = 1000 + static_cast<std::uint64_t>(k) * 7919 * (k + 1);
        p.c = 4.5 + 1.5 * k;
        p.delta = 0.1 + 0.45 * k;
        p.alpha = kAlphaCeiling / (1.0 + k);
        const Big n(p.n), lg = boost::multiprecision::log(n) / boost::multiprecision::log(Big(2));
        Big expect = Big(p.alpha) * pow(Big(p.delta), 4) / pow(Big(p.c), 9) * n / (lg * lg);
        if (expect > n) expect = n;
        const Big rel = abs(Big(theorem_rank_lower_bound(p)) - expect) / expect;
        worst = std::max(worst, rel.convert_to<double>());
    }
    return {worst < 1e-12, fmt("20 grid points, worst relative error %.3e vs 50-digit evaluation", worst)};
}

Outcome criterion12() {
    if (cli_path.empty()) return {false, "no --cli binary given"};
    const fs::path dir = scratch("c12");
    const Graph g = trifound::testing::erdos_renyi(300, 0.03, 12);
    {
        std::ofstream out(dir / "graph.txt");
        write_edge_list(g, out);
    }
    auto run = [&](unsigned threads, const std::string& out) {
        const std::string cmd = "\"" + cli_path + "\" audit --graph \"" + (dir / "graph.txt").string() + "\" --dim 10 " +
                                "--models tdp,lrdp,lrhp,softmax --samples 20 --seed 99 --threads " + std::to_string(threads) +
                                " --out \"" + (dir / out).string() + "\" > /dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    if (!run(1, "a") || !run(4, "b")) return {false, "audit run failed"};
    std::size_t compared = 0;
    bool same = true;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        same = same && slurp(entry.path()) == slurp(dir / "b" / entry.path().filename());
    }
    return {same && compared == 10, fmt("%.0f CSV files compared between --threads 1 and --threads 4", compared)};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"triangle curves match brute-force oracle", criterion1},
    {"rank lemma sweep", criterion2},
    {"packing lemma sweep", criterion3},
    {"independent-set floor", criterion4},
    {"negative dot mass sweep", criterion5},
    {"degree second moment bound", criterion6},
    {"sampler calibration", criterion7},
    {"full-rank reconstruction", criterion8},
    {"model edge-count calibration", criterion9},
    {"desk-scale low-degree triangle gap", criterion10},
    {"theorem bound vs multiprecision", criterion11},
    {"audit determinism across thread counts", criterion12},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--criterion" && k + 1 < argc) only = std::atoi(argv[++k]);
        else if (arg == "--cli" && k + 1 < argc) cli_path = argv[++k];
    }
    bool all = true;
    for (std::size_t k = 0; k < kCriteria.size(); ++k) {
        if (only && static_cast<int>(k + 1) != only) continue;
        Outcome o;
        try {
            o = kCriteria[k].second();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (k + 1) << " (" << kCriteria[k].first << "): " << o.detail
                  << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
