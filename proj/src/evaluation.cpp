#include "tguhm/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "tguhm/error.hpp"
#include "tguhm/reconstruct.hpp"

namespace tguhm {

namespace {

struct MatchCost {
    std::size_t tp = 0;
    std::size_t distance = 0;
    std::size_t position_sum = 0;

    bool operator==(const MatchCost&) const = default;
};

bool better(const MatchCost& a, const MatchCost& b) {
    if (a.tp != b.tp) return a.tp > b.tp;
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.position_sum < b.position_sum;
}

std::size_t gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

void check_sorted_unique(std::span<const std::size_t> v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) {
            throw ContractError(std::string(what) + " change-points must be sorted and unique");
        }
    }
}

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<ReplicateScore>& scores, double ReplicateScore::*field) {
    double sum = 0.0;
    for (const auto& s : scores) sum += s.*field;
    return scores.empty() ? 0.0 : sum / static_cast<double>(scores.size());
}

ReplicateScore score_replicate(const Replicate& rep, const MergeTree& tree, const ThresholdConfig& cfg,
                               const std::vector<std::size_t>& short_truth, std::size_t window,
                               std::size_t r) {
    const auto result = segment_tree(rep.series, tree, cfg);
    const auto& seg = result.segmentation;
    const auto match = match_change_points(rep.true_change_points, seg.change_points,
                                           rep.series.size(), window);
    ReplicateScore score;
    score.replicate = r;
    score.tp = match.tp;
    score.fp = match.fp;
    score.fn = match.fn;
    score.tpr = match.tpr;
    score.fpr = match.fpr;
    score.tpr_short = short_segment_tpr(short_truth, match);
    score.mse = mse(seg.fitted, rep.truth);
    return score;
}

SigmaSummary summarise(double sigma, std::vector<ReplicateScore> scores) {
    SigmaSummary out;
    out.sigma = sigma;
    out.atpr = mean_of(scores, &ReplicateScore::tpr);
    out.afpr = mean_of(scores, &ReplicateScore::fpr);
    out.amse = mean_of(scores, &ReplicateScore::mse);
    double fp = 0.0;
    double short_sum = 0.0;
    std::size_t short_count = 0;
    for (const auto& s : scores) {
        fp += static_cast<double>(s.fp);
        if (s.tpr_short) {
            short_sum += *s.tpr_short;
            ++short_count;
        }
    }
    out.mean_fp = scores.empty() ? 0.0 : fp / static_cast<double>(scores.size());
    if (short_count > 0) out.atpr_short = short_sum / static_cast<double>(short_count);
    out.replicates = std::move(scores);
    return out;
}

}  // namespace

MatchResult match_change_points(std::span<const std::size_t> truth,
                                std::span<const std::size_t> estimated, std::size_t n,
                                std::size_t window) {
    check_sorted_unique(truth, "true");
    check_sorted_unique(estimated, "estimated");

    // An optimal assignment never needs crossing pairs, so a sequence
    // alignment over the two sorted lists finds it.
    const std::size_t nt = truth.size();
    const std::size_t ne = estimated.size();
    std::vector<MatchCost> dp((nt + 1) * (ne + 1));
    const auto at = [&](std::size_t i, std::size_t j) -> MatchCost& { return dp[i * (ne + 1) + j]; };
    for (std::size_t i = 1; i <= nt; ++i) {
        for (std::size_t j = 1; j <= ne; ++j) {
            MatchCost best = at(i - 1, j);
            if (better(at(i, j - 1), best)) best = at(i, j - 1);
            const auto d = gap(truth[i - 1], estimated[j - 1]);
            if (d <= window) {
                MatchCost take = at(i - 1, j - 1);
                ++take.tp;
                take.distance += d;
                take.position_sum += estimated[j - 1];
                if (better(take, best)) best = take;
            }
            at(i, j) = best;
        }
    }

    MatchResult out;
    for (std::size_t i = nt, j = ne; i > 0 && j > 0;) {
        if (at(i, j) == at(i - 1, j)) {
            --i;
        } else if (at(i, j) == at(i, j - 1)) {
            --j;
        } else {
            out.matched_pairs.emplace_back(truth[i - 1], estimated[j - 1]);
            --i;
            --j;
        }
    }
    std::reverse(out.matched_pairs.begin(), out.matched_pairs.end());

    out.tp = out.matched_pairs.size();
    out.fp = ne - out.tp;
    out.fn = nt - out.tp;
    out.total_distance = at(nt, ne).distance;
    out.tpr = nt == 0 ? 1.0 : static_cast<double>(out.tp) / static_cast<double>(nt);
    const std::size_t boundaries = n > 0 ? n - 1 : 0;
    const std::size_t negatives = boundaries > nt ? boundaries - nt : 0;
    out.fpr = negatives == 0 ? 0.0
                             : std::min(1.0, static_cast<double>(out.fp) / static_cast<double>(negatives));
    return out;
}

std::optional<double> short_segment_tpr(std::span<const std::size_t> short_truth,
                                        const MatchResult& match) {
    if (short_truth.empty()) return std::nullopt;
    std::size_t hit = 0;
    for (const auto cp : short_truth) {
        const bool found = std::any_of(match.matched_pairs.begin(), match.matched_pairs.end(),
                                       [cp](const auto& p) { return p.first == cp; });
        if (found) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(short_truth.size());
}

std::optional<double> short_segment_tpr(const PiecewiseSignal& signal, const MatchResult& match,
                                        std::size_t min_length, std::size_t max_length,
                                        double theta) {
    return short_segment_tpr(signal.short_segment_change_points(min_length, max_length, theta), match);
}

double mse(std::span<const double> fitted, std::span<const double> truth) {
    if (fitted.size() != truth.size()) {
        throw ContractError("mse: length mismatch (" + std::to_string(fitted.size()) + " vs " +
                            std::to_string(truth.size()) + ")");
    }
    if (fitted.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const double d = fitted[i] - truth[i];
        sum += d * d;
    }
    return sum / static_cast<double>(fitted.size());
}

double roc_auc(std::span<const RocPoint> points) {
    std::vector<std::pair<double, double>> curve;
    curve.reserve(points.size() + 2);
    curve.emplace_back(0.0, 0.0);
    for (const auto& p : points) curve.emplace_back(p.mean_fpr, p.mean_tpr);
    curve.emplace_back(1.0, 1.0);
    std::sort(curve.begin(), curve.end());
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += (curve[i].first - curve[i - 1].first) * 0.5 * (curve[i].second + curve[i - 1].second);
    }
    return area;
}

double partial_roc_auc(std::span<const RocPoint> points, double fp_limit) {
    std::vector<std::pair<double, double>> curve;
    for (const auto& p : points) {
        if (p.mean_fp_count < fp_limit) curve.emplace_back(p.mean_fpr, p.mean_tpr);
    }
    if (curve.empty()) return 0.0;
    std::sort(curve.begin(), curve.end());
    const double span = curve.back().first;
    if (span <= 0.0) {
        double best = 0.0;
        for (const auto& c : curve) best = std::max(best, c.second);
        return best;
    }
    curve.insert(curve.begin(), {0.0, 0.0});
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += (curve[i].first - curve[i - 1].first) * 0.5 * (curve[i].second + curve[i - 1].second);
    }
    return area / span;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi >= lo) || n == 0) {
        throw ContractError("log_spaced needs 0 < lo <= hi and n >= 1");
    }
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

std::vector<double> default_sweep() { return log_spaced(0.1, 3.0, 30); }

MethodConfig method_for_cstar(int c_star) {
    MethodConfig m;
    m.name = "cstar=" + std::to_string(c_star);
    m.threshold.c_star = c_star;
    return m;
}

EvalReport run_scenario(const SimulationScenario& scenario, const std::vector<MethodConfig>& methods,
                        const EvalOptions& opts) {
    scenario.validate();
    if (methods.empty()) throw ContractError("run_scenario needs at least one method");
    for (const auto& m : methods) m.threshold.validate();

    const auto short_truth = scenario.signal.short_segment_change_points(
        scenario.short_min, scenario.short_max, scenario.theta);

    EvalReport report;
    report.scenario = scenario;
    report.match_window = opts.match_window;
    report.methods.resize(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) report.methods[m].method = methods[m];

    for (const double sigma : scenario.sigma_grid) {
        // scores[m][r]
        std::vector<std::vector<ReplicateScore>> scores(
            methods.size(), std::vector<ReplicateScore>(scenario.replicates));
        parallel_for(scenario.replicates, opts.threads, [&](std::size_t idx) {
            const auto rep = generate_replicate(scenario, sigma, idx + 1);
            std::map<double, MergeTree> trees;
            for (std::size_t m = 0; m < methods.size(); ++m) {
                auto it = trees.find(methods[m].rho);
                if (it == trees.end()) {
                    it = trees.emplace(methods[m].rho, forward_transform(rep.series, methods[m].rho)).first;
                }
                scores[m][idx] = score_replicate(rep, it->second, methods[m].threshold,
                                                 short_truth, opts.match_window, idx + 1);
            }
        });
        for (std::size_t m = 0; m < methods.size(); ++m) {
            report.methods[m].per_sigma.push_back(summarise(sigma, std::move(scores[m])));
        }
    }
    return report;
}

RocResult roc_curve(const SimulationScenario& scenario, const MethodConfig& method, double sigma,
                    std::span<const double> sweep, const EvalOptions& opts) {
    scenario.validate();
    method.threshold.validate();
    if (sweep.empty()) throw ContractError("roc_curve needs a non-empty sweep");
    for (const auto s : sweep) {
        if (!(s > 0.0)) throw ContractError("sweep scales must be positive");
    }

    struct Cell {
        double tpr = 0.0;
        double fpr = 0.0;
        double fp = 0.0;
    };
    // cells[r][k]: replicate r at sweep entry k
    std::vector<std::vector<Cell>> cells(scenario.replicates, std::vector<Cell>(sweep.size()));
    parallel_for(scenario.replicates, opts.threads, [&](std::size_t idx) {
        const auto rep = generate_replicate(scenario, sigma, idx + 1);
        const auto tree = forward_transform(rep.series, method.rho);
        const auto base = threshold(tree, method.threshold, rep.series);
        for (std::size_t k = 0; k < sweep.size(); ++k) {
            ThresholdConfig cfg = method.threshold;
            cfg.lambda = sweep[k] * base.lambda;
            cfg.sigma = base.sigma;
            const auto result = segment_tree(rep.series, tree, cfg);
            const auto match = match_change_points(rep.true_change_points,
                                                   result.segmentation.change_points,
                                                   rep.series.size(), opts.match_window);
            cells[idx][k] = {match.tpr, match.fpr, static_cast<double>(match.fp)};
        }
    });

    RocResult out;
    out.sigma = sigma;
    const double reps = static_cast<double>(scenario.replicates);
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        RocPoint p;
        p.scale = sweep[k];
        for (std::size_t r = 0; r < scenario.replicates; ++r) {
            p.mean_tpr += cells[r][k].tpr;
            p.mean_fpr += cells[r][k].fpr;
            p.mean_fp_count += cells[r][k].fp;
        }
        p.mean_tpr /= reps;
        p.mean_fpr /= reps;
        p.mean_fp_count /= reps;
        out.points.push_back(p);
    }
    std::stable_sort(out.points.begin(), out.points.end(), [](const RocPoint& a, const RocPoint& b) {
        if (a.mean_fpr != b.mean_fpr) return a.mean_fpr < b.mean_fpr;
        return a.mean_tpr < b.mean_tpr;
    });
    out.auc = roc_auc(out.points);
    out.partial_auc = partial_roc_auc(out.points);
    return out;
}

EvalReport evaluate(const SimulationScenario& scenario, const std::vector<MethodConfig>& methods,
                    std::span<const double> sweep, const EvalOptions& opts) {
    auto report = run_scenario(scenario, methods, opts);
    report.sweep.assign(sweep.begin(), sweep.end());
    if (!sweep.empty()) {
        for (auto& m : report.methods) {
            for (const double sigma : scenario.sigma_grid) {
                m.roc.push_back(roc_curve(scenario, m.method, sigma, sweep, opts));
            }
        }
    }
    return report;
}

}  // namespace tguhm
