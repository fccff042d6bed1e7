#include "tguhm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tguhm/error.hpp"

namespace tguhm {

namespace {

void check_range(const Series& series, std::size_t s, std::size_t e) {
    if (s < 1 || s > e || e > series.size()) {
        throw ContractError("region [" + std::to_string(s) + ", " + std::to_string(e) +
                            "] outside series of length " + std::to_string(series.size()));
    }
}

void check_split(std::size_t s, std::size_t b, std::size_t e) {
    if (s < 1 || b < s || b >= e) {
        throw ContractError("breakpoint " + std::to_string(b) + " outside [" + std::to_string(s) +
                            ", " + std::to_string(e) + ")");
    }
}

// Equal to l*c_{s,b} - r*c_{b+1,e}. A constant support gives exactly 0
// rather than summation round-off.
double pair_detail(const Region& left, const Region& right) {
    if (left.min == left.max && right.min == right.max && left.min == right.min) return 0.0;
    const double p = static_cast<double>(left.length());
    const double q = static_cast<double>(right.length());
    return std::sqrt(p * q / (p + q)) * (left.sum / p - right.sum / q);
}

struct Candidate {
    std::size_t left = 0;  // index of the left region; right is left + 1
    double magnitude = 0.0;
    double value = 0.0;
};

}  // namespace

double local_average(const Series& series, std::size_t s, std::size_t e) {
    check_range(series, s, e);
    const auto values = series.values();
    const double sum = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(s - 1),
                                       values.begin() + static_cast<std::ptrdiff_t>(e), 0.0);
    return sum / std::sqrt(static_cast<double>(e - s + 1));
}

DetailWeights detail_weights(std::size_t s, std::size_t b, std::size_t e) {
    check_split(s, b, e);
    const double total = static_cast<double>(e - s + 1);
    return {std::sqrt(static_cast<double>(e - b) / total),
            std::sqrt(static_cast<double>(b - s + 1) / total)};
}

double detail_value(const Series& series, std::size_t s, std::size_t b, std::size_t e) {
    check_split(s, b, e);
    check_range(series, s, e);
    const auto w = detail_weights(s, b, e);
    return w.left * local_average(series, s, b) - w.right * local_average(series, b + 1, e);
}

MergeState MergeState::from_series(const Series& series) {
    MergeState state;
    state.regions.reserve(series.size());
    const auto values = series.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        state.regions.push_back({i + 1, i + 1, values[i], values[i], values[i], no_child});
    }
    return state;
}

std::size_t merges_per_pass(std::size_t regions, double rho) {
    // rho * regions is formed in floating point; shave off representation
    // error so that e.g. 0.01 * 500 requests 5 merges, not 6.
    const double raw = rho * static_cast<double>(regions);
    const auto target = static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
    return std::max<std::size_t>(1, target);
}

std::size_t merge_pass(MergeState& state, double rho, std::vector<DetailCoefficient>& details) {
    auto& regions = state.regions;
    if (regions.size() < 2) {
        throw ContractError("merge_pass needs at least two regions, got " +
                            std::to_string(regions.size()));
    }
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw ContractError("rho must lie in (0, 1], got " + std::to_string(rho));
    }

    std::vector<Candidate> candidates(regions.size() - 1);
    for (std::size_t i = 0; i + 1 < regions.size(); ++i) {
        const double d = pair_detail(regions[i], regions[i + 1]);
        candidates[i] = {i, std::abs(d), d};
    }
    const auto before = [](const Candidate& a, const Candidate& b) {
        if (a.magnitude != b.magnitude) return a.magnitude < b.magnitude;
        return a.left < b.left;
    };

    const std::size_t target = merges_per_pass(regions.size(), rho);

    // Only the head of the ordering is normally needed. Sort a generous
    // prefix first and fall back to the full ordering if disjointness
    // rejections exhaust it.
    std::size_t sorted = std::min(candidates.size(), 4 * target + 16);
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(sorted),
                      candidates.end(), before);

    std::vector<char> used(regions.size(), 0);
    std::vector<Candidate> accepted;
    accepted.reserve(target);
    for (std::size_t i = 0; i < candidates.size() && accepted.size() < target; ++i) {
        if (i == sorted) {
            std::sort(candidates.begin() + static_cast<std::ptrdiff_t>(sorted), candidates.end(),
                      before);
            sorted = candidates.size();
        }
        const auto& c = candidates[i];
        if (used[c.left] || used[c.left + 1]) continue;
        used[c.left] = used[c.left + 1] = 1;
        accepted.push_back(c);
    }

    std::sort(accepted.begin(), accepted.end(),
              [](const Candidate& a, const Candidate& b) { return a.left < b.left; });

    ++state.pass;
    std::vector<Region> merged;
    merged.reserve(regions.size() - accepted.size());
    std::size_t next = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (next < accepted.size() && accepted[next].left == i) {
            const Region& l = regions[i];
            const Region& r = regions[i + 1];
            const auto w = detail_weights(l.s, l.e, r.e);
            DetailCoefficient d;
            d.scale = state.pass;
            d.within_scale_index = ++k;
            d.s = l.s;
            d.b = l.e;
            d.e = r.e;
            d.value = accepted[next].value;
            d.left_weight = w.left;
            d.right_weight = w.right;
            d.left_child = l.node;
            d.right_child = r.node;
            details.push_back(d);
            merged.push_back({l.s, r.e, l.sum + r.sum, std::min(l.min, r.min), std::max(l.max, r.max),
                              details.size() - 1});
            ++next;
            ++i;
        } else {
            merged.push_back(regions[i]);
        }
    }
    regions = std::move(merged);
    return accepted.size();
}

MergeTree forward_transform(const Series& series, double rho) {
    if (series.empty()) {
        throw InputError("forward_transform: empty series");
    }
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw ContractError("rho must lie in (0, 1], got " + std::to_string(rho));
    }
    MergeTree tree;
    tree.n = series.size();
    tree.rho = rho;
    tree.details.reserve(series.size() - 1);

    auto state = MergeState::from_series(series);
    while (state.regions.size() > 1) {
        merge_pass(state, rho, tree.details);
    }
    const Region& root = state.regions.front();
    tree.root_smooth = root.sum / std::sqrt(static_cast<double>(root.length()));
    return tree;
}

}  // namespace tguhm
