#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tguhm/series.hpp"

namespace tguhm {

inline constexpr double default_theta = 0.1;
inline constexpr std::int64_t simulated_window_bp = 150'000;

/// Piecewise-constant ground truth given as run lengths and levels.
struct PiecewiseSignal {
    std::vector<std::size_t> lengths;
    std::vector<double> levels;

    void validate() const;
    std::size_t size() const;

    /// Per-window levels f_1..f_n.
    std::vector<double> values() const;

    /// Cumulative boundaries where the level moves by more than theta.
    std::vector<std::size_t> change_points(double theta = default_theta) const;

    /// True change-points that bound a segment whose length lies in
    /// [min_length, max_length]. Both boundaries of such a segment count.
    std::vector<std::size_t> short_segment_change_points(std::size_t min_length,
                                                         std::size_t max_length,
                                                         double theta = default_theta) const;

    bool operator==(const PiecewiseSignal&) const = default;
};

/// Version tag of the built-in test-signal tables.
inline constexpr std::string_view builtin_signal_version = "1";

/// "F1": long and short segments, levels in [0, 4];
/// "F2": short altered segments only; "F3": one 6-window segment mid-series.
PiecewiseSignal builtin_signal(std::string_view id);
std::vector<std::string> builtin_signal_ids();

enum class NoiseKind { gaussian, contaminated };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

/// Gaussian N(0, sigma^2), or the contaminated mixture drawing from
/// N(0, (inflation * sigma)^2) with probability contamination_prob.
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.1;
    double contamination_prob = 0.05;
    double inflation = 3.0;

    void validate() const;
    bool operator==(const NoiseModel&) const = default;
};

/// Name of the generator behind sample_noise, recorded in run metadata.
inline constexpr std::string_view rng_name = "mt19937_64+splitmix64-seed";

/// Injective mix of (base_seed, stream) into a 64-bit generator seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream);

/// n i.i.d. draws. Per window the contaminated model consumes one uniform
/// (component choice) and then one standard normal; the Gaussian model
/// consumes only the normal. Draws are scaled by sigma afterwards, so the
/// same seed at different sigma gives proportional noise.
std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed);

struct SimulationScenario {
    std::string signal_id;  // built-in id, or empty when `signal` is explicit
    PiecewiseSignal signal;
    NoiseModel noise;  // noise.sigma is overridden by each sigma_grid entry
    std::vector<double> sigma_grid{0.1, 0.2, 0.3, 0.4, 0.5};
    std::size_t replicates = 1;
    std::uint64_t base_seed = 0;
    std::size_t short_min = 6;
    std::size_t short_max = 10;
    double theta = default_theta;

    void validate() const;
    bool operator==(const SimulationScenario&) const = default;
};

struct Replicate {
    Series series;
    std::vector<double> truth;
    std::vector<std::size_t> true_change_points;
    std::uint64_t seed = 0;
};

/// y = f + noise for replicate r (1-based) at noise level sigma. The noise
/// stream depends only on (base_seed, r).
Replicate generate_replicate(const SimulationScenario& scenario, double sigma, std::size_t r);

/// Uses scenario.noise.sigma.
Replicate generate_replicate(const SimulationScenario& scenario, std::size_t r);

/// Series of simulated windows laid out at simulated_window_bp spacing.
Series simulated_series(std::vector<double> values, std::string label = "sim");

}  // namespace tguhm
