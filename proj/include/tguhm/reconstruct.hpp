#pragma once

#include <cstddef>
#include <vector>

#include "tguhm/series.hpp"
#include "tguhm/threshold.hpp"
#include "tguhm/transform.hpp"

namespace tguhm {

/// Piecewise-constant fit. A change-point b means the level changes between
/// window b and b+1 (1-based), so segment j covers (bounds[j], bounds[j+1]].
struct Segmentation {
    std::vector<std::size_t> change_points;
    std::vector<std::size_t> segment_bounds;  // 0, b_1, ..., b_N, n
    std::vector<double> segment_means;
    std::vector<double> fitted;

    std::size_t segment_count() const { return segment_means.size(); }
};

struct SegmentDiagnostics {
    double sigma = 0.0;
    double lambda = 0.0;
    bool sigma_estimated = false;
    bool zero_sigma = false;
    std::size_t details = 0;
    std::size_t stage1_survivors = 0;
    std::size_t survivors = 0;
};

struct SegmentResult {
    Segmentation segmentation;
    SegmentDiagnostics diagnostics;
};

/// Sorted, de-duplicated breakpoints of the surviving details.
std::vector<std::size_t> extract_change_points(const MergeTree& tree,
                                               const std::vector<std::size_t>& kept);

/// Fits the sample mean of y on every segment delimited by `change_points`,
/// which must be strictly increasing and inside (0, n).
Segmentation fit_segments(const Series& series, const std::vector<std::size_t>& change_points);

/// Transform, two-stage thresholding and segment-mean reconstruction.
SegmentResult segment(const Series& series, const ThresholdConfig& cfg, double rho = default_rho);

/// Same as segment() but reuses a transform that was already computed for
/// `series`.
SegmentResult segment_tree(const Series& series, const MergeTree& tree, const ThresholdConfig& cfg);

}  // namespace tguhm
