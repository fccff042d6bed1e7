#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tguhm/simulation.hpp"
#include "tguhm/threshold.hpp"
#include "tguhm/transform.hpp"

namespace tguhm {

inline constexpr std::size_t default_match_window = 2;
inline constexpr double partial_auc_fp_limit = 20.0;

/// Outcome of matching estimated change-points to the truth.
struct MatchResult {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;  // (truth, estimate)
    std::size_t total_distance = 0;
    double tpr = 0.0;  // 1 when there is nothing to find
    double fpr = 0.0;  // fp / ((n - 1) - |truth|)
};

/// One-to-one matching within +/- window. Among all valid assignments the
/// result has the most true positives, then the least total distance, then
/// prefers earlier estimates (so of two equidistant estimates the earlier
/// one is the TP). Both inputs must be sorted and free of duplicates; n is
/// the series length and fixes the FPR denominator.
MatchResult match_change_points(std::span<const std::size_t> truth,
                                std::span<const std::size_t> estimated, std::size_t n,
                                std::size_t window = default_match_window);

/// Fraction of `short_truth` (a subset of the matched truth set) recovered.
/// Empty when there are no short-segment change-points.
std::optional<double> short_segment_tpr(std::span<const std::size_t> short_truth,
                                        const MatchResult& match);

std::optional<double> short_segment_tpr(const PiecewiseSignal& signal, const MatchResult& match,
                                        std::size_t min_length = 6, std::size_t max_length = 10,
                                        double theta = default_theta);

/// (1/n) * sum (fitted - truth)^2.
double mse(std::span<const double> fitted, std::span<const double> truth);

/// A segmentation method under evaluation.
struct MethodConfig {
    std::string name;
    ThresholdConfig threshold;
    double rho = default_rho;
};

struct ReplicateScore {
    std::size_t replicate = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double tpr = 0.0;
    double fpr = 0.0;
    std::optional<double> tpr_short;
    double mse = 0.0;
};

struct SigmaSummary {
    double sigma = 0.0;
    double atpr = 0.0;
    double afpr = 0.0;
    std::optional<double> atpr_short;
    double amse = 0.0;
    double mean_fp = 0.0;
    std::vector<ReplicateScore> replicates;
};

struct RocPoint {
    double scale = 0.0;
    double mean_fpr = 0.0;
    double mean_tpr = 0.0;
    double mean_fp_count = 0.0;
};

struct RocResult {
    double sigma = 0.0;
    std::vector<RocPoint> points;  // sorted by (mean_fpr, mean_tpr)
    double auc = 0.0;
    double partial_auc = 0.0;
};

struct MethodReport {
    MethodConfig method;
    std::vector<SigmaSummary> per_sigma;  // scenario.sigma_grid order
    std::vector<RocResult> roc;           // empty unless a sweep was requested
};

struct EvalReport {
    SimulationScenario scenario;
    std::size_t match_window = default_match_window;
    std::vector<double> sweep;
    std::vector<MethodReport> methods;
};

struct EvalOptions {
    std::size_t match_window = default_match_window;
    std::size_t threads = 1;
};

/// Trapezoidal area under (fpr, tpr) points extended with (0,0) and (1,1).
double roc_auc(std::span<const RocPoint> points);

/// Area over the points whose mean FP count is below fp_limit, starting from
/// (0,0) and normalised by the FPR span of that region. If the region has no
/// FPR extent the best TPR inside it is returned; 0 if the region is empty.
double partial_roc_auc(std::span<const RocPoint> points, double fp_limit = partial_auc_fp_limit);

/// n log-spaced scales in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t n);
std::vector<double> default_sweep();

/// Methods c* = 1..k with otherwise default settings, named "cstar=<c>".
MethodConfig method_for_cstar(int c_star);

/// Simulates every (sigma, replicate), segments it with each method and
/// scores the result. Output is independent of `threads`.
EvalReport run_scenario(const SimulationScenario& scenario, const std::vector<MethodConfig>& methods,
                        const EvalOptions& opts = {});

/// Traces mean (FPR, TPR) at one sigma while scaling lambda by each entry of
/// `sweep`. The unscaled lambda is cfg.threshold.lambda if given, else the
/// automatic one.
RocResult roc_curve(const SimulationScenario& scenario, const MethodConfig& method, double sigma,
                    std::span<const double> sweep, const EvalOptions& opts = {});

/// run_scenario plus roc_curve for every method and sigma.
EvalReport evaluate(const SimulationScenario& scenario, const std::vector<MethodConfig>& methods,
                    std::span<const double> sweep, const EvalOptions& opts = {});

}  // namespace tguhm
