#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace trifound {

struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    // Smallest slack seen (holds-side minus fails-side); negative on failure.
    double worst_margin = 0.0;
    std::string counterexample;  // JSON, empty when every trial passed
    bool passed() const { return failures == 0; }
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    std::size_t rank_trials = 1000;
    std::size_t neg_trials = 1000;
    std::size_t packing_trials = 100;  // per dimension
    std::size_t packing_max_dim = 8;
    std::size_t independent_set_trials = 100;
    std::size_t second_moment_trials = 50;
    std::size_t triangle_bound_trials = 50;
    std::size_t certificate_trials = 20;
    unsigned threads = 1;
    // Swappable so a harness can confirm that a broken bound is caught.
    std::function<double(const Eigen::MatrixXd&)> rank_bound;
};

PropertyResult check_rank_lemma(const VerifyOptions& options);
PropertyResult check_dot_mass(const VerifyOptions& options);
PropertyResult check_packing(const VerifyOptions& options);
PropertyResult check_independent_set(const VerifyOptions& options);
PropertyResult check_degree_second_moment(const VerifyOptions& options);
PropertyResult check_triangle_sketch_bound(const VerifyOptions& options);
PropertyResult check_certificate_dimension(const VerifyOptions& options);
PropertyResult check_theorem_scaling(const VerifyOptions& options);

std::vector<PropertyResult> run_theory_checks(const VerifyOptions& options = {});

// {"passed": bool, "properties": [{name, trials, failures, worst_margin, passed, counterexample?}]}
std::string theory_report_json(const std::vector<PropertyResult>& results);

}  // namespace trifound
