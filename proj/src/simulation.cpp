#include "tguhm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tguhm/error.hpp"

namespace tguhm {

void PiecewiseSignal::validate() const {
    if (lengths.empty()) {
        throw InputError("signal needs at least one segment");
    }
    if (lengths.size() != levels.size()) {
        throw InputError("signal has " + std::to_string(lengths.size()) + " lengths but " +
                         std::to_string(levels.size()) + " levels");
    }
    for (std::size_t j = 0; j < lengths.size(); ++j) {
        if (lengths[j] == 0) throw InputError("signal segment " + std::to_string(j + 1) + " has length 0");
        if (!std::isfinite(levels[j])) {
            throw InputError("signal segment " + std::to_string(j + 1) + " has a non-finite level");
        }
    }
}

std::size_t PiecewiseSignal::size() const {
    std::size_t n = 0;
    for (const auto len : lengths) n += len;
    return n;
}

std::vector<double> PiecewiseSignal::values() const {
    std::vector<double> f;
    f.reserve(size());
    for (std::size_t j = 0; j < lengths.size(); ++j) f.insert(f.end(), lengths[j], levels[j]);
    return f;
}

std::vector<std::size_t> PiecewiseSignal::change_points(double theta) const {
    std::vector<std::size_t> cps;
    std::size_t boundary = 0;
    for (std::size_t j = 0; j + 1 < lengths.size(); ++j) {
        boundary += lengths[j];
        if (std::abs(levels[j + 1] - levels[j]) > theta) cps.push_back(boundary);
    }
    return cps;
}

std::vector<std::size_t> PiecewiseSignal::short_segment_change_points(std::size_t min_length,
                                                                      std::size_t max_length,
                                                                      double theta) const {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    for (std::size_t j = 0; j < lengths.size(); ++j) {
        const std::size_t end = start + lengths[j];
        if (lengths[j] >= min_length && lengths[j] <= max_length) {
            if (j > 0 && std::abs(levels[j] - levels[j - 1]) > theta) out.push_back(start);
            if (j + 1 < lengths.size() && std::abs(levels[j + 1] - levels[j]) > theta) {
                out.push_back(end);
            }
        }
        start = end;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Fixed geometries for the three test functions. Baseline ratio is 1.0.
PiecewiseSignal builtin_signal(std::string_view id) {
    if (id == "F1") {
        return {{60, 8, 50, 40, 30, 6, 45, 25, 40, 10, 35, 20, 40, 7, 44},
                {1.0, 1.5, 1.0, 2.0, 1.0, 0.5, 1.0, 0.0, 1.0, 1.5, 1.0, 4.0, 1.0, 0.5, 1.0}};
    }
    if (id == "F2") {
        return {{40, 6, 40, 7, 40, 8, 40, 9, 40, 10, 40, 6, 40},
                {1.0, 1.5, 1.0, 0.5, 1.0, 2.0, 1.0, 0.25, 1.0, 2.5, 1.0, 1.75, 1.0}};
    }
    if (id == "F3") {
        return {{147, 6, 147}, {1.0, 1.5, 1.0}};
    }
    throw InputError("unknown built-in signal '" + std::string(id) + "' (expected F1, F2 or F3)");
}

std::vector<std::string> builtin_signal_ids() { return {"F1", "F2", "F3"}; }

std::string_view to_string(NoiseKind kind) {
    return kind == NoiseKind::gaussian ? "gaussian" : "contaminated";
}

NoiseKind parse_noise_kind(std::string_view text) {
    if (text == "gaussian") return NoiseKind::gaussian;
    if (text == "contaminated") return NoiseKind::contaminated;
    throw InputError("unknown noise kind '" + std::string(text) +
                     "' (expected gaussian or contaminated)");
}

void NoiseModel::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("noise sigma must be finite and >= 0");
    if (!(contamination_prob >= 0.0 && contamination_prob < 1.0)) {
        throw InputError("contamination probability must lie in [0, 1)");
    }
    if (!(inflation > 0.0) || !std::isfinite(inflation)) throw InputError("inflation must be > 0");
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream) {
    // splitmix64 finaliser: a bijection on 64-bit words, so distinct streams
    // under one base seed never collide.
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& x : out) {
        double scale = model.sigma;
        if (model.kind == NoiseKind::contaminated && uniform(engine) < model.contamination_prob) {
            scale *= model.inflation;
        }
        x = scale * normal(engine);
    }
    return out;
}

void SimulationScenario::validate() const {
    signal.validate();
    noise.validate();
    if (replicates < 1) throw InputError("replicates must be >= 1");
    if (sigma_grid.empty()) throw InputError("sigma_grid must not be empty");
    for (const auto s : sigma_grid) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("sigma_grid entries must be finite and >= 0");
    }
    if (short_min < 1 || short_min > short_max) throw InputError("invalid short segment range");
    if (!(theta >= 0.0)) throw InputError("theta must be >= 0");
}

Series simulated_series(std::vector<double> values, std::string label) {
    std::vector<std::int64_t> positions(values.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i] = static_cast<std::int64_t>(i) * simulated_window_bp;
    }
    return Series(std::move(values), std::move(positions), std::move(label));
}

Replicate generate_replicate(const SimulationScenario& scenario, double sigma, std::size_t r) {
    if (r < 1 || r > scenario.replicates) {
        throw ContractError("replicate index " + std::to_string(r) + " outside [1, " +
                            std::to_string(scenario.replicates) + "]");
    }
    NoiseModel model = scenario.noise;
    model.sigma = sigma;
    Replicate rep;
    rep.seed = derive_seed(scenario.base_seed, r);
    rep.truth = scenario.signal.values();
    rep.true_change_points = scenario.signal.change_points(scenario.theta);
    auto y = sample_noise(model, rep.truth.size(), rep.seed);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += rep.truth[i];
    rep.series = simulated_series(std::move(y));
    return rep;
}

Replicate generate_replicate(const SimulationScenario& scenario, std::size_t r) {
    return generate_replicate(scenario, scenario.noise.sigma, r);
}

}  // namespace tguhm
