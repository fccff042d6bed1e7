#include "tguhm/reconstruct.hpp"

#include <algorithm>
#include <string>

#include "tguhm/error.hpp"

namespace tguhm {

std::vector<std::size_t> extract_change_points(const MergeTree& tree,
                                               const std::vector<std::size_t>& kept) {
    std::vector<std::size_t> cps;
    cps.reserve(kept.size());
    for (const auto i : kept) cps.push_back(tree.details.at(i).b);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return cps;
}

Segmentation fit_segments(const Series& series, const std::vector<std::size_t>& change_points) {
    const std::size_t n = series.size();
    if (n == 0) {
        throw InputError("fit_segments: empty series");
    }
    std::size_t prev = 0;
    for (const auto b : change_points) {
        if (b <= prev || b >= n) {
            throw ContractError("change-point " + std::to_string(b) +
                                " is not strictly increasing inside (0, " + std::to_string(n) + ")");
        }
        prev = b;
    }

    Segmentation seg;
    seg.change_points = change_points;
    seg.segment_bounds.reserve(change_points.size() + 2);
    seg.segment_bounds.push_back(0);
    seg.segment_bounds.insert(seg.segment_bounds.end(), change_points.begin(), change_points.end());
    seg.segment_bounds.push_back(n);

    const auto y = series.values();
    seg.fitted.resize(n);
    seg.segment_means.reserve(seg.segment_bounds.size() - 1);
    for (std::size_t j = 0; j + 1 < seg.segment_bounds.size(); ++j) {
        const auto lo = seg.segment_bounds[j];
        const auto hi = seg.segment_bounds[j + 1];
        double sum = 0.0;
        for (auto i = lo; i < hi; ++i) sum += y[i];
        const double mean = sum / static_cast<double>(hi - lo);
        seg.segment_means.push_back(mean);
        std::fill(seg.fitted.begin() + static_cast<std::ptrdiff_t>(lo),
                  seg.fitted.begin() + static_cast<std::ptrdiff_t>(hi), mean);
    }
    return seg;
}

SegmentResult segment_tree(const Series& series, const MergeTree& tree, const ThresholdConfig& cfg) {
    const auto th = threshold(tree, cfg, series);
    SegmentResult out;
    out.segmentation = fit_segments(series, extract_change_points(tree, th.survivors.kept));
    out.diagnostics.sigma = th.sigma;
    out.diagnostics.lambda = th.lambda;
    out.diagnostics.sigma_estimated = th.sigma_estimated;
    out.diagnostics.zero_sigma = th.zero_sigma;
    out.diagnostics.details = tree.details.size();
    out.diagnostics.stage1_survivors = th.survivors.stage1_kept.size();
    out.diagnostics.survivors = th.survivors.kept.size();
    return out;
}

SegmentResult segment(const Series& series, const ThresholdConfig& cfg, double rho) {
    cfg.validate();
    return segment_tree(series, forward_transform(series, rho), cfg);
}

}  // namespace tguhm
