#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tguhm/error.hpp"
#include "tguhm/transform.hpp"

using namespace tguhm;

namespace {

double energy(const std::vector<double>& y) {
    return std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
}

double tree_energy(const MergeTree& t) {
    double e = t.root_smooth * t.root_smooth;
    for (const auto& d : t.details) e += d.value * d.value;
    return e;
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("local_average") {
    CHECK(local_average(Series::from_values({2, 2}), 1, 2) == doctest::Approx(2.8284271247461903));
    CHECK(local_average(Series::from_values({5}), 1, 1) == 5.0);
    CHECK(local_average(Series::from_values({0, 0, 0}), 1, 3) == 0.0);
    const auto s = Series::from_values({1, 2, 3});
    CHECK_THROWS_AS(local_average(s, 0, 2), ContractError);
    CHECK_THROWS_AS(local_average(s, 2, 4), ContractError);
    CHECK_THROWS_AS(local_average(s, 3, 2), ContractError);
}

TEST_CASE("detail_weights") {
    auto w = detail_weights(1, 1, 2);
    CHECK(w.left == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(w.right == doctest::Approx(1.0 / std::sqrt(2.0)));
    w = detail_weights(1, 3, 4);
    CHECK(w.left == doctest::Approx(0.5));
    CHECK(w.right == doctest::Approx(0.8660254037844386));
    for (std::size_t s = 1; s < 8; ++s) {
        for (std::size_t e = s + 1; e < 12; ++e) {
            for (std::size_t b = s; b < e; ++b) {
                const auto v = detail_weights(s, b, e);
                CHECK(std::abs(v.left * v.left + v.right * v.right - 1.0) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(detail_weights(3, 2, 5), ContractError);
    CHECK_THROWS_AS(detail_weights(1, 4, 4), ContractError);
}

TEST_CASE("detail_value") {
    CHECK(detail_value(Series::from_values({0, 0, 0, 4}), 1, 3, 4) ==
          doctest::Approx(-3.4641016151377544));
    CHECK(detail_value(Series::from_values({1, 2}), 1, 1, 2) == doctest::Approx(-0.7071067811865475));
    const auto flat = Series::from_values(std::vector<double>(9, 0.7));
    for (std::size_t b = 1; b < 9; ++b) CHECK(std::abs(detail_value(flat, 1, b, 9)) < 1e-12);
}

TEST_CASE("merges_per_pass rounds up rho * regions") {
    CHECK(merges_per_pass(5, 0.01) == 1);
    CHECK(merges_per_pass(100, 0.01) == 1);
    CHECK(merges_per_pass(101, 0.01) == 2);
    CHECK(merges_per_pass(500, 0.01) == 5);
    CHECK(merges_per_pass(10, 1.0) == 10);
}

TEST_CASE("merge_pass") {
    SUBCASE("five regions at rho=0.01 merge one pair") {
        auto state = MergeState::from_series(Series::from_values({1, 5, 2, 8, 3}));
        std::vector<DetailCoefficient> out;
        CHECK(merge_pass(state, 0.01, out) == 1);
        CHECK(state.regions.size() == 4);
        CHECK(out.size() == 1);
        CHECK(out[0].scale == 1);
        CHECK(out[0].within_scale_index == 1);
    }
    SUBCASE("two regions merge into one") {
        auto state = MergeState::from_series(Series::from_values({1, 4}));
        std::vector<DetailCoefficient> out;
        CHECK(merge_pass(state, 0.5, out) == 1);
        CHECK(state.regions.size() == 1);
    }
    SUBCASE("smallest |d| first") {
        auto state = MergeState::from_series(Series::from_values({0, 0, 9}));
        std::vector<DetailCoefficient> out;
        merge_pass(state, 0.01, out);
        REQUIRE(out.size() == 1);
        CHECK(out[0].s == 1);
        CHECK(out[0].b == 1);
        CHECK(out[0].e == 2);
        CHECK(out[0].value == 0.0);
    }
    SUBCASE("merged pairs are disjoint and k follows s") {
        auto state = MergeState::from_series(Series::from_values({0, 0, 0, 0, 0, 0, 0, 0}));
        std::vector<DetailCoefficient> out;
        const auto merged = merge_pass(state, 1.0, out);
        CHECK(merged == 4);  // ties go to smaller s: (1,2), (3,4), (5,6), (7,8)
        for (std::size_t k = 0; k < out.size(); ++k) {
            CHECK(out[k].within_scale_index == k + 1);
            CHECK(out[k].s == 2 * k + 1);
        }
    }
    SUBCASE("fewer than two regions is a contract violation") {
        auto state = MergeState::from_series(Series::from_values({1}));
        std::vector<DetailCoefficient> out;
        CHECK_THROWS_AS(merge_pass(state, 0.5, out), ContractError);
    }
}

TEST_CASE("forward_transform examples") {
    SUBCASE("two points") {
        const auto t = forward_transform(Series::from_values({1, 2}));
        REQUIRE(t.details.size() == 1);
        CHECK(t.details[0].value == doctest::Approx(-0.7071067811865475));
        CHECK(t.root_smooth == doctest::Approx(2.1213203435596424));
        CHECK(tree_energy(t) == doctest::Approx(5.0));
    }
    SUBCASE("constant input") {
        const auto t = forward_transform(Series::from_values(std::vector<double>(17, 0.3)));
        CHECK(t.details.size() == 16);
        for (const auto& d : t.details) CHECK(d.value == 0.0);
        CHECK(t.root_smooth == doctest::Approx(0.3 * std::sqrt(17.0)));
    }
    SUBCASE("step is merged last") {
        const auto t = forward_transform(Series::from_values({0, 0, 0, 4}), 0.01);
        REQUIRE(t.details.size() == 3);
        CHECK(t.details[0].value == 0.0);
        CHECK(t.details[1].value == 0.0);
        CHECK(t.details[0].e <= 3);
        CHECK(t.details[1].e <= 3);
        CHECK(t.details[2].b == 3);
        CHECK(t.details[2].value == doctest::Approx(-3.4641016151377544));
        CHECK(t.details[2].left_child == 1);
        CHECK(t.details[2].right_child == no_child);
    }
    SUBCASE("single point") {
        const auto t = forward_transform(Series::from_values({4.5}));
        CHECK(t.details.empty());
        CHECK(t.root_smooth == 4.5);
    }
    SUBCASE("bad input") {
        CHECK_THROWS_AS(forward_transform(Series{}), InputError);
        CHECK_THROWS_AS(forward_transform(Series::from_values({1, 2}), 0.0), ContractError);
        CHECK_THROWS_AS(forward_transform(Series::from_values({1, 2}), 1.5), ContractError);
    }
}

TEST_CASE("structural properties over random series") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> len(1, 120);
    std::uniform_real_distribution<double> rho_dist(0.001, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = len(rng);
        const auto y = oracle::random_series(rng, n);
        const double rho = trial % 3 == 0 ? 0.01 : rho_dist(rng);
        const auto t = forward_transform(Series::from_values(y), rho);

        REQUIRE(t.details.size() == n - 1);
        const double e = energy(y);
        CHECK(std::abs(tree_energy(t) - e) <= 1e-9 * std::max(1.0, e));

        std::set<std::size_t> breakpoints;
        std::size_t max_scale = 0;
        for (std::size_t i = 0; i < t.details.size(); ++i) {
            const auto& d = t.details[i];
            breakpoints.insert(d.b);
            max_scale = std::max(max_scale, d.scale);
            CHECK(std::abs(d.left_weight * d.left_weight + d.right_weight * d.right_weight - 1.0) < 1e-12);
            // children precede parents and tile the arms
            if (d.left_child != no_child) {
                REQUIRE(d.left_child < i);
                CHECK(t.details[d.left_child].s == d.s);
                CHECK(t.details[d.left_child].e == d.b);
            } else {
                CHECK(d.left_arm() == 1);
            }
            if (d.right_child != no_child) {
                REQUIRE(d.right_child < i);
                CHECK(t.details[d.right_child].s == d.b + 1);
                CHECK(t.details[d.right_child].e == d.e);
            } else {
                CHECK(d.right_arm() == 1);
            }
        }
        CHECK(breakpoints.size() == n - 1);
        CHECK(max_scale <= std::max<std::size_t>(n, 1) - 1 + (n == 1 ? 0 : 0));
    }
}

TEST_CASE("constant runs give zero details") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y;
        std::uniform_int_distribution<int> runs(1, 5), run_len(1, 15);
        std::uniform_real_distribution<double> level(-3, 3);
        for (int r = runs(rng); r > 0; --r) y.insert(y.end(), static_cast<std::size_t>(run_len(rng)), level(rng));
        const auto t = forward_transform(Series::from_values(y));
        for (const auto& d : t.details) {
            bool constant = true;
            for (std::size_t i = d.s; i < d.e; ++i) constant = constant && y[i - 1] == y[i];
            if (constant) CHECK(std::abs(d.value) < 1e-12);
        }
    }
}

TEST_CASE("detail values match direct evaluation") {
    SUBCASE("exhaustive over {0,1,2}^n, n <= 8") {
        for (std::size_t n = 1; n <= 8; ++n) {
            oracle::for_each_word(n, {0.0, 1.0, 2.0}, [](const std::vector<double>& y) {
                const auto t = forward_transform(Series::from_values(y));
                for (const auto& d : t.details) {
                    REQUIRE(std::abs(d.value - oracle::detail(y, d.s, d.b, d.e)) <= 1e-12);
                }
            });
        }
    }
    SUBCASE("random series up to length 50") {
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<std::size_t> len(1, 50);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto y = oracle::random_series(rng, len(rng));
            const auto series = Series::from_values(y);
            const auto t = forward_transform(series);
            for (const auto& d : t.details) {
                const double ref = oracle::detail(y, d.s, d.b, d.e);
                REQUIRE(std::abs(d.value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
                REQUIRE(std::abs(detail_value(series, d.s, d.b, d.e) - ref) <=
                        1e-12 * std::max(1.0, std::abs(ref)));
            }
        }
    }
}

}  // TEST_SUITE
