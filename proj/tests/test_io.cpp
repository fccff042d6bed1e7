#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "tguhm/error.hpp"
#include "tguhm/io.hpp"
#include "tguhm/report_io.hpp"

using namespace tguhm;

namespace {

RatioTable parse(const std::string& text) {
    std::istringstream in(text);
    return read_ratio_table(in, "t.tsv");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("ratio tables") {
    SUBCASE("four valid rows") {
        const auto t = parse(
            "chromosome\tstart\tend\tratio\n"
            "chr1\t0\t150000\t1.0\n"
            "chr1\t150000\t300000\t1.1\n"
            "chr1\t300000\t450000\t0.9\n"
            "chr1\t450000\t600000\t1.0\n");
        REQUIRE(t.chromosomes.size() == 1);
        CHECK(t.chromosomes[0].records.size() == 4);
        CHECK(t.dropped == 0);
        CHECK(t.warnings.empty());
        const auto s = to_series(t.chromosomes[0]);
        CHECK(s.size() == 4);
        CHECK(s.label() == "chr1");
        CHECK(s.at(2) == 1.1);
    }
    SUBCASE("missing ratios are dropped and counted") {
        const auto t = parse(
            "chrom\tstart\tend\tratio\textra\n"
            "2\t0\t10\t1.0\tx\n"
            "2\t10\t20\tNA\tx\n"
            "2\t20\t30\tnan\tx\n"
            "2\t30\t40\t1.2\tx\n");
        CHECK(t.chromosomes.at(0).records.size() == 2);
        CHECK(t.dropped == 2);
        CHECK(t.warnings.size() == 1);
    }
    SUBCASE("empty file") {
        const auto t = parse("");
        CHECK(t.chromosomes.empty());
        CHECK(t.warnings.size() == 1);
    }
    SUBCASE("comments and chromosome grouping") {
        const auto t = parse(
            "# sample A\n"
            "chr\tratio\tstart\tend\n"
            "chrX\t1.0\t0\t10\n"
            "chr2\t1.5\t0\t10\n"
            "chrX\t1.1\t10\t20\n");
        REQUIRE(t.chromosomes.size() == 2);
        CHECK(t.chromosomes[0].chromosome == "chrX");
        CHECK(t.chromosomes[0].records.size() == 2);
        CHECK(t.chromosomes[1].records[0].ratio == 1.5);
    }
    SUBCASE("unsorted rows are sorted with a warning") {
        const auto t = parse(
            "chromosome\tstart\tend\tratio\n"
            "1\t20\t30\t3\n"
            "1\t0\t10\t1\n"
            "1\t10\t20\t2\n");
        CHECK(t.chromosomes[0].records[0].ratio == 1);
        CHECK(t.chromosomes[0].records[2].ratio == 3);
        CHECK(t.warnings.size() == 1);
    }
    SUBCASE("malformed rows name the line") {
        CHECK(error_of("chromosome\tstart\tend\tratio\n1\t0\t10\t1\n1\t10\tx\t1\n").find("t.tsv:3:") == 0);
        CHECK(error_of("chromosome\tstart\tend\tratio\n1\t0\t10\n").find("t.tsv:2:") == 0);
        CHECK(error_of("chromosome\tstart\tend\tratio\n1\t10\t10\t1\n").find("t.tsv:2:") == 0);
        CHECK(error_of("chromosome\tstart\tend\tratio\n1\t0\t10\tabc\n").find("t.tsv:2:") == 0);
        CHECK(error_of("chromosome\tbegin\tend\tratio\n").find("'start'") != std::string::npos);
        CHECK_FALSE(error_of("chromosome\tstart\tend\tratio\n1\t0\t10\t1\n1\t0\t20\t1\n").empty());
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_ratio_file("/nonexistent/ratios.tsv"), InputError);
    }
}

TEST_CASE("calls") {
    CHECK(call_for(1.2, 0.1) == CallLabel::gain);
    CHECK(call_for(0.85, 0.1) == CallLabel::loss);
    CHECK(call_for(1.05, 0.1) == CallLabel::neutral);
    CHECK(call_for(1.09, 0.1) == CallLabel::neutral);
    CHECK(to_string(CallLabel::loss) == "loss");
}

TEST_CASE("number formatting") {
    CHECK(format_fixed6(1.0) == "1.000000");
    CHECK(format_fixed6(-1e-9) == "0.000000");
    CHECK(format_fixed6(0.1234567) == "0.123457");
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5}) {
        CHECK(std::stod(format_exact(v)) == v);
    }
}

TEST_CASE("segments table round trip") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> nd(0.0, 0.2);
    ChromosomeRecords chrom{"chr7", {}};
    for (int i = 0; i < 120; ++i) {
        const double level = (i >= 40 && i < 48) ? 1.6 : (i >= 90 ? 0.5 : 1.0);
        chrom.records.push_back({"chr7", i * 1000, (i + 1) * 1000, level + nd(rng)});
    }
    const auto series = to_series(chrom);
    const auto seg = segment(series, ThresholdConfig{}).segmentation;
    const auto records = make_segment_records(chrom, seg, 0.1);

    CHECK(records.front().start_window == 1);
    CHECK(records.back().end_window == 120);
    CHECK(records.back().end_bp == 120000);
    for (std::size_t j = 1; j < records.size(); ++j) {
        CHECK(records[j].start_window == records[j - 1].end_window + 1);
    }

    std::ostringstream out;
    write_segments(out, records, {{"tool", "test"}, {"rho", "0.01"}});
    CHECK(out.str().rfind("# tool: test\n# rho: 0.01\n", 0) == 0);
    std::istringstream in(out.str());
    const auto back = read_segments(in);
    REQUIRE(back.size() == records.size());
    CHECK(expand_segments(back, "chr7") == seg.fitted);
    CHECK(back[0].call == records[0].call);
    CHECK(back[0].end_bp == records[0].end_bp);
}

TEST_CASE("change-point table") {
    ChromosomeRecords chrom{"c1", {{"c1", 0, 10, 1}, {"c1", 10, 20, 2}, {"c1", 20, 30, 2}}};
    std::ostringstream out;
    write_change_points(out, {{"c1", {1}}}, {chrom}, {});
    CHECK(out.str() == "chromosome\twindow_index\tposition_bp\nc1\t1\t10\n");
    CHECK_THROWS_AS(write_change_points(out, {{"c9", {1}}}, {chrom}, {}), ContractError);
}

TEST_CASE("scenario documents") {
    SUBCASE("round trip") {
        SimulationScenario sc;
        sc.signal = {{10, 7, 10}, {1.0, 2.0, 1.0}};
        sc.noise.kind = NoiseKind::contaminated;
        sc.noise.contamination_prob = 0.1;
        sc.noise.inflation = std::sqrt(3.0);
        sc.sigma_grid = {0.1, 0.3};
        sc.noise.sigma = 0.1;
        sc.replicates = 3;
        sc.base_seed = 123456789012345ULL;
        sc.short_min = 5;
        sc.short_max = 9;
        const auto text = scenario_to_json(sc).dump();
        CHECK(scenario_from_json(nlohmann::json::parse(text)) == sc);

        auto builtin = sc;
        builtin.signal_id = "F2";
        builtin.signal = builtin_signal("F2");
        CHECK(scenario_from_json(scenario_to_json(builtin)) == builtin);
    }
    SUBCASE("defaults") {
        const auto sc = scenario_from_json(nlohmann::json::parse(R"({"signal": "F3"})"));
        CHECK(sc.signal == builtin_signal("F3"));
        CHECK(sc.sigma_grid.size() == 5);
        CHECK(sc.noise.kind == NoiseKind::gaussian);
        CHECK(sc.noise.inflation == 3.0);
        CHECK(sc.noise.contamination_prob == 0.05);
    }
    SUBCASE("errors name the key") {
        const auto message = [](const char* text) {
            try {
                scenario_from_json(nlohmann::json::parse(text));
            } catch (const InputError& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        CHECK(message(R"({"signal": "F1", "replicas": 3})").find("'replicas'") != std::string::npos);
        CHECK(message(R"({"signal": "F1", "replicates": "many"})").find("'replicates'") != std::string::npos);
        CHECK(message(R"({"signal": "F9"})").find("'signal'") != std::string::npos);
        CHECK(message(R"({"noise": "gaussian"})").find("'signal'") != std::string::npos);
        CHECK(message(R"({"signal": "F1", "noise": "cauchy"})").find("'noise'") != std::string::npos);
        CHECK(message(R"({"signal": "F1", "short_segment_range": [6]})").find("'short_segment_range'") !=
              std::string::npos);
        CHECK_FALSE(message(R"({"signal": "F1", "replicates": 0})").empty());
    }
}

}  // TEST_SUITE
