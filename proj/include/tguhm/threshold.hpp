#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tguhm/series.hpp"
#include "tguhm/transform.hpp"

namespace tguhm {

/// Consistency constant turning a MAD into a Gaussian standard deviation.
inline constexpr double mad_to_sigma = 1.4826;

struct ThresholdConfig {
    std::optional<double> lambda;  // empty: sigma * sqrt(2 * lambda_constant * ln n)
    std::optional<double> sigma;   // empty: estimated from first differences
    int c_star = 2;
    double lambda_constant = 1.01;

    void validate() const;
};

/// Indices into MergeTree::details, ascending.
struct SurvivorSet {
    std::vector<std::size_t> stage1_kept;
    std::vector<std::size_t> kept;
};

struct ThresholdResult {
    SurvivorSet survivors;
    double sigma = 0.0;
    double lambda = 0.0;
    bool sigma_estimated = false;
    /// Set when the noise estimate came out as exactly zero, so that the
    /// automatic threshold degenerated to 0 and every non-zero detail survives.
    bool zero_sigma = false;
};

/// 1.4826 * MAD of the signed finest-scale Haar coefficients
/// (y[i+1] - y[i]) / sqrt(2). Needs n >= 2.
double estimate_sigma(const Series& series);

/// sigma * sqrt(2 * lambda_constant * ln n). Needs n >= 2.
double default_lambda(double sigma, std::size_t n, double lambda_constant = 1.01);

/// Keeps a detail iff some coefficient in its subtree (itself included) has
/// magnitude strictly above lambda. The result is closed under ancestors.
std::vector<std::size_t> connected_threshold(const MergeTree& tree, double lambda);

/// Drops every detail whose left or right arm is shorter than c_star.
std::vector<std::size_t> unconnected_threshold(const MergeTree& tree,
                                               const std::vector<std::size_t>& stage1,
                                               int c_star);

ThresholdResult threshold(const MergeTree& tree, const ThresholdConfig& cfg, const Series& series);

}  // namespace tguhm
