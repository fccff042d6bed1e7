#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "json.hpp"
#include "tguhm/error.hpp"
#include "tguhm/simulation.hpp"

using namespace tguhm;

namespace {

double sample_variance(const std::vector<double>& x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size() - 1);
}

// Independent θ-rule evaluation straight from the length/level tables.
std::vector<std::size_t> boundaries_over_theta(const PiecewiseSignal& s, double theta) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    for (std::size_t j = 0; j + 1 < s.lengths.size(); ++j) {
        pos += s.lengths[j];
        if (std::abs(s.levels[j + 1] - s.levels[j]) > theta) out.push_back(pos);
    }
    return out;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("F3 geometry") {
    const auto f3 = builtin_signal("F3");
    CHECK(f3.lengths == std::vector<std::size_t>{147, 6, 147});
    CHECK(f3.levels == std::vector<double>{1.0, 1.5, 1.0});
    CHECK(f3.change_points() == std::vector<std::size_t>{147, 153});
    CHECK(f3.size() == 300);
}

TEST_CASE("F2 has only short altered segments") {
    const auto f2 = builtin_signal("F2");
    std::set<double> heights;
    for (std::size_t j = 0; j < f2.lengths.size(); ++j) {
        if (f2.levels[j] != 1.0) {
            CHECK(f2.lengths[j] >= 6);
            CHECK(f2.lengths[j] <= 10);
            heights.insert(f2.levels[j]);
        }
    }
    CHECK(heights.size() > 2);
    CHECK(f2.short_segment_change_points(6, 10) == f2.change_points());
}

TEST_CASE("F1 mixes long and short segments") {
    const auto f1 = builtin_signal("F1");
    bool has_long = false, has_short = false;
    for (std::size_t j = 0; j < f1.lengths.size(); ++j) {
        has_long = has_long || f1.lengths[j] > 10;
        const bool is_short = f1.lengths[j] >= 6 && f1.lengths[j] <= 10;
        has_short = has_short || is_short;
        if (is_short) CHECK(std::abs(f1.levels[j] - 1.0) == doctest::Approx(0.5));
        CHECK(f1.levels[j] >= 0.0);
        CHECK(f1.levels[j] <= 4.0);
    }
    CHECK(has_long);
    CHECK(has_short);
    CHECK(*std::min_element(f1.levels.begin(), f1.levels.end()) == 0.0);
    CHECK(*std::max_element(f1.levels.begin(), f1.levels.end()) == 4.0);
}

TEST_CASE("change-points follow the height tolerance on every built-in signal") {
    for (const auto& id : builtin_signal_ids()) {
        const auto s = builtin_signal(id);
        CHECK(s.change_points(0.1) == boundaries_over_theta(s, 0.1));
        CHECK(s.values().size() == s.size());
    }
    PiecewiseSignal small{{5, 5, 5}, {1.0, 1.05, 2.0}};
    CHECK(small.change_points() == std::vector<std::size_t>{10});
    CHECK(small.change_points(0.01) == std::vector<std::size_t>{5, 10});
}

TEST_CASE("shipped signal table matches the compiled one") {
    std::ifstream in(std::string(TGUHM_SOURCE_DIR) + "/config/builtin_signals.json");
    REQUIRE(in);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc.at("version").get<std::string>() == builtin_signal_version);
    for (const auto& id : builtin_signal_ids()) {
        const auto& sig = doc.at("signals").at(id);
        CHECK(sig.at("lengths").get<std::vector<std::size_t>>() == builtin_signal(id).lengths);
        CHECK(sig.at("levels").get<std::vector<double>>() == builtin_signal(id).levels);
    }
}

TEST_CASE("signal validation") {
    CHECK_THROWS_AS(builtin_signal("F4"), InputError);
    CHECK_THROWS_AS((PiecewiseSignal{{}, {}}.validate()), InputError);
    CHECK_THROWS_AS((PiecewiseSignal{{3, 2}, {1.0}}.validate()), InputError);
    CHECK_THROWS_AS((PiecewiseSignal{{3, 0}, {1.0, 2.0}}.validate()), InputError);
}

TEST_CASE("noise samples") {
    SUBCASE("zero sigma gives zeros") {
        NoiseModel m;
        m.sigma = 0.0;
        for (double v : sample_noise(m, 100, 1)) CHECK(v == 0.0);
    }
    SUBCASE("gaussian standard deviation") {
        NoiseModel m;
        m.sigma = 0.3;
        const auto x = sample_noise(m, 100000, 2024);
        CHECK(std::abs(std::sqrt(sample_variance(x)) / 0.3 - 1.0) < 0.01);
    }
    SUBCASE("contaminated variance is 1.4 sigma^2") {
        NoiseModel m;
        m.kind = NoiseKind::contaminated;
        m.sigma = 0.2;
        const auto x = sample_noise(m, 100000, 99);
        CHECK(std::abs(sample_variance(x) / (1.4 * 0.04) - 1.0) < 0.03);
    }
    SUBCASE("contaminant component has sd d*sigma") {
        NoiseModel m;
        m.kind = NoiseKind::contaminated;
        m.sigma = 0.2;
        m.contamination_prob = 0.999999;
        const auto x = sample_noise(m, 100000, 4);
        CHECK(std::abs(std::sqrt(sample_variance(x)) / 0.6 - 1.0) < 0.01);
    }
    SUBCASE("deterministic per seed") {
        NoiseModel m;
        m.kind = NoiseKind::contaminated;
        CHECK(sample_noise(m, 500, 17) == sample_noise(m, 500, 17));
        CHECK(sample_noise(m, 500, 17) != sample_noise(m, 500, 18));
    }
    SUBCASE("bad models") {
        NoiseModel m;
        m.contamination_prob = 1.0;
        CHECK_THROWS_AS(m.validate(), InputError);
        m.contamination_prob = 0.05;
        m.inflation = 0.0;
        CHECK_THROWS_AS(m.validate(), InputError);
        CHECK(parse_noise_kind("contaminated") == NoiseKind::contaminated);
        CHECK_THROWS_AS(parse_noise_kind("laplace"), InputError);
    }
}

TEST_CASE("seed derivation") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t base : {0ULL, 1ULL, 42ULL}) {
        for (std::uint64_t r = 1; r <= 2000; ++r) seen.insert(derive_seed(base, r));
    }
    CHECK(seen.size() == 6000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("replicates") {
    SimulationScenario sc;
    sc.signal_id = "F3";
    sc.signal = builtin_signal("F3");
    sc.replicates = 5;
    sc.base_seed = 11;

    const auto a = generate_replicate(sc, 0.3, 2);
    const auto b = generate_replicate(sc, 0.3, 2);
    CHECK(std::equal(a.series.values().begin(), a.series.values().end(), b.series.values().begin()));
    CHECK(a.true_change_points == std::vector<std::size_t>{147, 153});
    CHECK(a.truth == sc.signal.values());
    CHECK(a.series.positions()[1] - a.series.positions()[0] == simulated_window_bp);

    const auto c = generate_replicate(sc, 0.3, 3);
    for (std::size_t i = 0; i < 10; ++i) CHECK(a.series.values()[i] != c.series.values()[i]);

    const auto exact = generate_replicate(sc, 0.0, 1);
    CHECK(std::equal(exact.truth.begin(), exact.truth.end(), exact.series.values().begin()));

    // one noise stream per replicate, shared across the sigma grid
    const auto small = generate_replicate(sc, 0.1, 4);
    const auto large = generate_replicate(sc, 0.4, 4);
    for (std::size_t i = 0; i < small.truth.size(); ++i) {
        CHECK((large.series.values()[i] - large.truth[i]) ==
              doctest::Approx(4.0 * (small.series.values()[i] - small.truth[i])));
    }

    CHECK_THROWS_AS(generate_replicate(sc, 0.1, 0), ContractError);
    CHECK_THROWS_AS(generate_replicate(sc, 0.1, 6), ContractError);
}

}  // TEST_SUITE
