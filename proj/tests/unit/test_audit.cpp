#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "support.hpp"
#include "trifound/audit.hpp"
#include "trifound/graph.hpp"

using namespace trifound;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("trifound_audit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_graph(const fs::path& dir, const Graph& g) {
    const fs::path path = dir / "graph.txt";
    std::ofstream out(path);
    write_edge_list(g, out);
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AuditConfig small_config(const fs::path& dir, const Graph& g) {
    AuditConfig cfg;
    cfg.graph_path = write_graph(dir, g);
    cfg.output_dir = dir / "out";
    cfg.dim = 4;
    cfg.num_samples = 5;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST(Audit, CompleteGraphAtFullRank) {
    const fs::path dir = scratch("k4");
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 4; ++i)
        for (Vertex j = i + 1; j < 4; ++j) edges.emplace_back(i, j);
    AuditConfig cfg = small_config(dir, Graph::from_edges(4, edges));
    cfg.num_samples = 10;
    const auto report = cmd_audit(cfg);
    EXPECT_EQ(slurp(report.original_curve), "c,delta\n3,1\n");
    EXPECT_EQ(slurp(report.model_curves.at("tdp")), "c,delta\n3,1\n");
    EXPECT_TRUE(fs::exists(report.observed_degrees));
    EXPECT_TRUE(fs::exists(report.expected_degrees.at("tdp")));
    const auto doc = nlohmann::json::parse(slurp(report.report_json));
    EXPECT_EQ(doc.at("config").at("seed").get<std::uint64_t>(), 7u);
    EXPECT_TRUE(doc.contains("wall_seconds"));
}

TEST(Audit, AllModelsWriteEveryFile) {
    const fs::path dir = scratch("all");
    AuditConfig cfg = small_config(dir, trifound::testing::erdos_renyi(80, 0.1, 3));
    cfg.models = {ModelKind::tdp, ModelKind::lrdp, ModelKind::lrhp, ModelKind::softmax};
    const auto report = cmd_audit(cfg);
    for (const char* name : {"tdp", "lrdp", "lrhp", "softmax"}) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / (std::string("curve_") + name + ".csv")));
        EXPECT_TRUE(fs::exists(cfg.output_dir / (std::string("degdist_expected_") + name + ".csv")));
    }
    // Every curve shares one grid.
    auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    const auto expected = lines(slurp(report.original_curve));
    for (const auto& [name, path] : report.model_curves) EXPECT_EQ(lines(slurp(path)), expected) << name;
}

TEST(Audit, OriginalCurveMatchesStandaloneComputation) {
    const fs::path dir = scratch("orig");
    const Graph g = trifound::testing::erdos_renyi(60, 0.12, 5);
    AuditConfig cfg = small_config(dir, g);
    const auto report = cmd_audit(cfg);
    const auto curve = triangle_foundation_curve(g, g.num_vertices());
    std::istringstream csv(slurp(report.original_curve));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        const std::size_t c = std::stoul(line.substr(0, comma));
        EXPECT_EQ(std::stod(line.substr(comma + 1)), curve.delta_at(c));
    }
}

TEST(Audit, DeterministicAcrossThreadCounts) {
    const fs::path dir = scratch("det");
    AuditConfig cfg = small_config(dir, trifound::testing::erdos_renyi(120, 0.06, 9));
    cfg.models = {ModelKind::tdp, ModelKind::lrhp};
    cfg.threads = 1;
    cmd_audit(cfg);
    const std::string a = slurp(cfg.output_dir / "curve_lrhp.csv");
    cfg.output_dir = dir / "out2";
    cfg.threads = 3;
    cmd_audit(cfg);
    EXPECT_EQ(slurp(cfg.output_dir / "curve_lrhp.csv"), a);
}

TEST(Audit, FailureRemovesPartialOutput) {
    const fs::path dir = scratch("fail");
    AuditConfig cfg = small_config(dir, trifound::testing::erdos_renyi(10, 0.3, 1));
    cfg.dim = 50;
    try {
        cmd_audit(cfg);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "embed");
    }
    EXPECT_FALSE(fs::exists(cfg.output_dir));
}

TEST(Audit, MissingGraphIsLoadStageError) {
    AuditConfig cfg;
    cfg.graph_path = "/nonexistent/graph.txt";
    cfg.output_dir = scratch("missing") / "out";
    try {
        cmd_audit(cfg);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "load");
    }
}

TEST(Audit, ConfigValidation) {
    AuditConfig cfg;
    cfg.graph_path = "g";
    cfg.output_dir = "o";
    cfg.models.clear();
    EXPECT_THROW(validate(cfg), Error);
    cfg.models = {ModelKind::tdp};
    cfg.num_samples = 0;
    EXPECT_THROW(validate(cfg), Error);
}

TEST(Audit, RankSweepAtFullRankEqualsOriginal) {
    const fs::path dir = scratch("sweep");
    const Graph g = trifound::testing::erdos_renyi(30, 0.2, 4);
    AuditConfig cfg = small_config(dir, g);
    cfg.rank_sweep = {1, 30};
    const auto report = cmd_ranksweep(cfg);
    EXPECT_EQ(slurp(report.model_curves.at("rank_30")), slurp(report.original_curve));
    EXPECT_TRUE(fs::exists(cfg.output_dir / "curve_rank_1.csv"));
}

TEST(Audit, ExternalEmbeddingUsesGraphLabels) {
    const fs::path dir = scratch("external");
    {
        std::ofstream g(dir / "graph.txt");
        g << "10 20\n20 30\n10 30\n";
        std::ofstream e(dir / "emb.txt");
        e << "3 1\n30 1\n10 1\n20 1\n";
    }
    AuditConfig cfg;
    cfg.graph_path = dir / "graph.txt";
    cfg.external_embedding_path = dir / "emb.txt";
    cfg.output_dir = dir / "out";
    cfg.num_samples = 3;
    const auto report = cmd_audit(cfg);
    EXPECT_EQ(slurp(report.model_curves.at("tdp")), "c,delta\n2,0.33333333333333331\n");
}

TEST(Audit, RankOneSweepLosesLowDegreeTriangles) {
    const fs::path dir = scratch("rank1");
    AuditConfig cfg = small_config(dir, trifound::testing::disjoint_triangles(100));
    cfg.rank_sweep = {1};
    cfg.num_samples = 10;
    cmd_ranksweep(cfg);
    std::istringstream csv(slurp(cfg.output_dir / "curve_rank_1.csv"));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        if (std::stoul(line.substr(0, comma)) <= 4) EXPECT_LT(std::stod(line.substr(comma + 1)), 0.01) << line;
    }
}
