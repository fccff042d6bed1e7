#include "tguhm/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tguhm/error.hpp"

namespace tguhm {

namespace {

double median_in_place(std::vector<double>& v) {
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower =
        *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace

void ThresholdConfig::validate() const {
    if (c_star < 1) {
        throw ContractError("c_star must be >= 1, got " + std::to_string(c_star));
    }
    if (lambda && !(*lambda >= 0.0)) {
        throw ContractError("lambda must be >= 0");
    }
    if (sigma && !(*sigma >= 0.0)) {
        throw ContractError("sigma must be >= 0");
    }
    if (!(lambda_constant > 0.0)) {
        throw ContractError("lambda_constant must be > 0");
    }
}

double estimate_sigma(const Series& series) {
    if (series.size() < 2) {
        throw InputError("estimate_sigma needs at least 2 observations, got " +
                         std::to_string(series.size()));
    }
    const auto y = series.values();
    std::vector<double> w(y.size() - 1);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        w[i] = (y[i + 1] - y[i]) / std::sqrt(2.0);
    }
    std::vector<double> scratch = w;
    const double centre = median_in_place(scratch);
    for (auto& x : w) x = std::abs(x - centre);
    return mad_to_sigma * median_in_place(w);
}

double default_lambda(double sigma, std::size_t n, double lambda_constant) {
    if (n < 2) {
        throw ContractError("default_lambda needs n >= 2, got " + std::to_string(n));
    }
    if (!(sigma >= 0.0)) {
        throw ContractError("sigma must be >= 0");
    }
    return sigma * std::sqrt(2.0 * lambda_constant * std::log(static_cast<double>(n)));
}

std::vector<std::size_t> connected_threshold(const MergeTree& tree, double lambda) {
    if (!(lambda >= 0.0)) {
        throw ContractError("lambda must be >= 0");
    }
    // Children precede parents, so one forward sweep yields subtree maxima.
    std::vector<double> subtree_max(tree.details.size(), 0.0);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < tree.details.size(); ++i) {
        const auto& d = tree.details[i];
        double m = std::abs(d.value);
        if (d.left_child != no_child) m = std::max(m, subtree_max[d.left_child]);
        if (d.right_child != no_child) m = std::max(m, subtree_max[d.right_child]);
        subtree_max[i] = m;
        if (m > lambda) kept.push_back(i);
    }
    return kept;
}

std::vector<std::size_t> unconnected_threshold(const MergeTree& tree,
                                               const std::vector<std::size_t>& stage1,
                                               int c_star) {
    if (c_star < 1) {
        throw ContractError("c_star must be >= 1, got " + std::to_string(c_star));
    }
    const auto min_arm = static_cast<std::size_t>(c_star);
    std::vector<std::size_t> kept;
    kept.reserve(stage1.size());
    for (const auto i : stage1) {
        const auto& d = tree.details.at(i);
        if (d.left_arm() >= min_arm && d.right_arm() >= min_arm) kept.push_back(i);
    }
    return kept;
}

ThresholdResult threshold(const MergeTree& tree, const ThresholdConfig& cfg, const Series& series) {
    cfg.validate();
    if (series.size() != tree.n) {
        throw ContractError("tree built for n=" + std::to_string(tree.n) + " but series has n=" +
                            std::to_string(series.size()));
    }
    ThresholdResult out;
    if (cfg.sigma) {
        out.sigma = *cfg.sigma;
    } else if (series.size() >= 2) {
        out.sigma = estimate_sigma(series);
        out.sigma_estimated = true;
    }
    if (cfg.lambda) {
        out.lambda = *cfg.lambda;
    } else if (series.size() >= 2) {
        out.lambda = default_lambda(out.sigma, series.size(), cfg.lambda_constant);
        out.zero_sigma = out.sigma == 0.0;
    }
    out.survivors.stage1_kept = connected_threshold(tree, out.lambda);
    out.survivors.kept = unconnected_threshold(tree, out.survivors.stage1_kept, cfg.c_star);
    return out;
}

}  // namespace tguhm
