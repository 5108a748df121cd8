#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trifound/edge_models.hpp"
#include "trifound/embedding.hpp"
#include "trifound/error.hpp"

namespace trifound {

inline constexpr const char* kVersion = "0.1.0";

struct AuditConfig {
    std::filesystem::path graph_path;
    std::size_t dim = 100;
    std::vector<ModelKind> models{ModelKind::tdp};
    std::size_t num_samples = 100;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> external_embedding_path;
    std::vector<std::size_t> rank_sweep;
    std::size_t negative_ratio = 10;
    unsigned threads = 1;
    SpectralOptions spectral;
};

// Failure in one pipeline stage ("load", "embed", "fit:lrdp", ...).
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what) : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct AuditReport {
    std::filesystem::path original_curve;
    std::map<std::string, std::filesystem::path> model_curves;  // model name, or "rank_<d>" for sweeps
    std::filesystem::path observed_degrees;
    std::map<std::string, std::filesystem::path> expected_degrees;
    std::map<std::string, FitReport> fits;
    std::filesystem::path report_json;
    double wall_seconds = 0.0;
};

void validate(const AuditConfig& config);

// load -> embed -> fit each model -> max curve over samples -> degree
// distributions -> CSV + report.json. Every curve is written on the union of
// degrees seen in the input and in all samples. On failure the files written
// so far are removed and a StageError is thrown.
AuditReport cmd_audit(const AuditConfig& config);

// One TDP curve per entry of rank_sweep (the first selected model is used
// instead when it is not TDP), written as curve_rank_<d>.csv.
AuditReport cmd_ranksweep(const AuditConfig& config);

}  // namespace trifound
