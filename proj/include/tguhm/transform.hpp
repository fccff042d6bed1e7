#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "tguhm/series.hpp"

namespace tguhm {

inline constexpr std::size_t no_child = std::numeric_limits<std::size_t>::max();
inline constexpr double default_rho = 0.01;

/// One unbalanced Haar detail coefficient.
///
/// Indices are 1-based and inclusive: the left arm is [s, b] and the right
/// arm is [b+1, e]. `left_child` / `right_child` index into
/// MergeTree::details and are `no_child` when the arm is a single window.
struct DetailCoefficient {
    std::size_t scale = 0;               // pass number j, starting at 1
    std::size_t within_scale_index = 0;  // k, ordered by increasing s
    std::size_t s = 0;
    std::size_t b = 0;
    std::size_t e = 0;
    double value = 0.0;
    double left_weight = 0.0;
    double right_weight = 0.0;
    std::size_t left_child = no_child;
    std::size_t right_child = no_child;

    std::size_t left_arm() const { return b - s + 1; }
    std::size_t right_arm() const { return e - b; }
};

/// Full record of a forward transform. Children always precede their parent
/// in `details`.
struct MergeTree {
    std::vector<DetailCoefficient> details;
    double root_smooth = 0.0;
    std::size_t n = 0;
    double rho = default_rho;
};

struct DetailWeights {
    double left = 0.0;
    double right = 0.0;
};

/// (e-s+1)^{-1/2} * sum(y_s..y_e), 1-based inclusive.
double local_average(const Series& series, std::size_t s, std::size_t e);

/// Weights of the detail filter for arms [s,b] and [b+1,e]. These are the
/// unique non-negative pair with l^2 + r^2 = 1 that annihilates constants.
DetailWeights detail_weights(std::size_t s, std::size_t b, std::size_t e);

double detail_value(const Series& series, std::size_t s, std::size_t b, std::size_t e);

/// A contiguous region [s, e] of the current coarse representation. `node`
/// is the detail that created it, or `no_child` for a single window.
struct Region {
    std::size_t s = 0;
    std::size_t e = 0;
    double sum = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t node = no_child;

    std::size_t length() const { return e - s + 1; }
};

/// Working state between passes of the forward transform.
struct MergeState {
    std::vector<Region> regions;
    std::size_t pass = 0;

    static MergeState from_series(const Series& series);
};

/// Runs one tail-greedy pass: scores every adjacent pair, then merges up to
/// ceil(rho * regions) disjoint pairs in order of increasing |d| (ties by
/// smaller s). New coefficients are appended to `details`. Returns the number
/// of merges performed.
std::size_t merge_pass(MergeState& state, double rho, std::vector<DetailCoefficient>& details);

/// Number of pairs a pass tries to merge when `regions` regions remain.
std::size_t merges_per_pass(std::size_t regions, double rho);

MergeTree forward_transform(const Series& series, double rho = default_rho);

}  // namespace tguhm
