// Command-line front end: segment ratio files, simulate replicate data sets
// and evaluate detection performance.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "tguhm/error.hpp"
#include "tguhm/evaluation.hpp"
#include "tguhm/io.hpp"
#include "tguhm/reconstruct.hpp"
#include "tguhm/report_io.hpp"
#include "tguhm/simulation.hpp"

#ifndef TGUHM_VERSION
#define TGUHM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace tguhm;

namespace {

constexpr const char* config_env = "TGUHM_CONFIG";

// Flag defaults; TGUHM_CONFIG may point at a JSON object overriding any of
// them.
struct Defaults {
    double rho = default_rho;
    int c_star = 2;
    double theta = default_theta;
    std::size_t match_window = default_match_window;
    double alpha = 0.05;
    double inflation = 3.0;
    std::size_t threads = 1;
};

Defaults load_defaults() {
    Defaults d;
    const char* path = std::getenv(config_env);
    if (path == nullptr || *path == '\0') return d;
    std::ifstream in(path);
    if (!in) throw InputError(std::string(config_env) + ": cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
        for (const auto& [key, value] : doc.items()) {
            if (key == "rho") d.rho = value.get<double>();
            else if (key == "cstar") d.c_star = value.get<int>();
            else if (key == "theta") d.theta = value.get<double>();
            else if (key == "match_window") d.match_window = value.get<std::size_t>();
            else if (key == "alpha") d.alpha = value.get<double>();
            else if (key == "inflation") d.inflation = value.get<double>();
            else if (key == "threads") d.threads = value.get<std::size_t>();
            else throw InputError(std::string(config_env) + ": unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string(config_env) + ": " + e.what());
    }
    return d;
}

std::optional<double> parse_auto(const std::string& text, const char* flag) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InputError(std::string(flag) + " expects a number or 'auto', got '" + text + "'");
    }
}

std::string auto_or(const std::optional<double>& v) { return v ? format_exact(*v) : "auto"; }

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
    return fs::path(prefix + suffix);
}

Metadata base_metadata(const std::string& command) {
    return {{"tool", "tguhm"}, {"version", TGUHM_VERSION}, {"command", command}};
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
    std::string input;
    std::string out;
    double rho = default_rho;
    int c_star = 2;
    std::string lambda = "auto";
    std::string sigma = "auto";
    double theta = default_theta;
    bool whole_genome = false;
};

// Cuts a genome-wide segmentation back into one piece per chromosome.
Segmentation slice(const Segmentation& whole, std::size_t offset, std::size_t length) {
    Segmentation s;
    s.fitted.assign(whole.fitted.begin() + static_cast<std::ptrdiff_t>(offset),
                    whole.fitted.begin() + static_cast<std::ptrdiff_t>(offset + length));
    s.segment_bounds.push_back(0);
    for (const auto b : whole.change_points) {
        if (b > offset && b < offset + length) {
            s.change_points.push_back(b - offset);
            s.segment_bounds.push_back(b - offset);
        }
    }
    s.segment_bounds.push_back(length);
    for (std::size_t j = 0; j + 1 < s.segment_bounds.size(); ++j) {
        s.segment_means.push_back(s.fitted[s.segment_bounds[j]]);
    }
    return s;
}

int run_segment(const SegmentArgs& a) {
    ThresholdConfig cfg;
    cfg.c_star = a.c_star;
    cfg.lambda = parse_auto(a.lambda, "--lambda");
    cfg.sigma = parse_auto(a.sigma, "--sigma");
    cfg.validate();

    const auto table = read_ratio_file(a.input);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';

    Metadata meta = base_metadata("segment");
    meta.emplace_back("input", a.input);
    meta.emplace_back("rho", format_exact(a.rho));
    meta.emplace_back("c_star", std::to_string(a.c_star));
    meta.emplace_back("lambda", auto_or(cfg.lambda));
    meta.emplace_back("sigma", auto_or(cfg.sigma));
    meta.emplace_back("theta", format_exact(a.theta));
    meta.emplace_back("mode", a.whole_genome ? "whole-genome" : "per-chromosome");
    meta.emplace_back("dropped_rows", std::to_string(table.dropped));
    meta.emplace_back("seed", "n/a");

    std::vector<SegmentRecord> segments;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> cps;

    const auto record_diag = [&](const std::string& label, const SegmentDiagnostics& d) {
        meta.emplace_back("sigma_hat[" + label + "]", format_exact(d.sigma));
        meta.emplace_back("lambda_used[" + label + "]", format_exact(d.lambda));
        if (d.zero_sigma) {
            std::cerr << "warning: " << label
                      << ": estimated noise level is 0; automatic threshold is 0\n";
        }
    };

    if (a.whole_genome && !table.chromosomes.empty()) {
        std::vector<double> values;
        for (const auto& c : table.chromosomes) {
            for (const auto& r : c.records) values.push_back(r.ratio);
        }
        const auto series = Series::from_values(std::move(values), "genome");
        const auto result = segment(series, cfg, a.rho);
        record_diag("genome", result.diagnostics);
        std::size_t offset = 0;
        for (const auto& c : table.chromosomes) {
            const auto part = slice(result.segmentation, offset, c.records.size());
            auto recs = make_segment_records(c, part, a.theta);
            segments.insert(segments.end(), recs.begin(), recs.end());
            cps.emplace_back(c.chromosome, part.change_points);
            offset += c.records.size();
        }
    } else {
        for (const auto& c : table.chromosomes) {
            const auto series = to_series(c);
            if (series.size() < 2) {
                std::cerr << "warning: chromosome " << c.chromosome
                          << " has fewer than 2 windows; reported as a single segment\n";
            }
            const auto result = segment(series, cfg, a.rho);
            record_diag(c.chromosome, result.diagnostics);
            auto recs = make_segment_records(c, result.segmentation, a.theta);
            segments.insert(segments.end(), recs.begin(), recs.end());
            cps.emplace_back(c.chromosome, result.segmentation.change_points);
        }
    }
    if (table.chromosomes.empty()) std::cerr << "warning: " << a.input << ": no usable records\n";

    auto seg_out = open_out(with_suffix(a.out, ".segments.tsv"));
    write_segments(seg_out, segments, meta);
    auto cp_out = open_out(with_suffix(a.out, ".changepoints.tsv"));
    write_change_points(cp_out, cps, table.chromosomes, meta);
    return 0;
}

// ---------------------------------------------------- simulate / evaluate

struct ScenarioArgs {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::optional<std::string> noise;
    std::optional<double> alpha;
    std::optional<double> inflation;
    std::optional<double> theta;
    std::vector<double> sigma_grid;
};

SimulationScenario resolve_scenario(const ScenarioArgs& a) {
    auto sc = load_scenario(a.scenario);
    if (a.seed) sc.base_seed = *a.seed;
    if (a.replicates) sc.replicates = *a.replicates;
    if (a.noise) sc.noise.kind = parse_noise_kind(*a.noise);
    if (a.alpha) sc.noise.contamination_prob = *a.alpha;
    if (a.inflation) sc.noise.inflation = *a.inflation;
    if (a.theta) sc.theta = *a.theta;
    if (!a.sigma_grid.empty()) sc.sigma_grid = a.sigma_grid;
    sc.validate();
    return sc;
}

Metadata scenario_metadata(const std::string& command, const ScenarioArgs& a,
                           const SimulationScenario& sc) {
    Metadata meta = base_metadata(command);
    meta.emplace_back("scenario", scenario_to_json(sc).dump());
    meta.emplace_back("scenario_file", a.scenario);
    meta.emplace_back("rng", std::string(rng_name));
    meta.emplace_back("signal_table_version", std::string(builtin_signal_version));
    return meta;
}

int run_simulate(const ScenarioArgs& a) {
    const auto sc = resolve_scenario(a);
    const fs::path dir(a.out);
    fs::create_directories(dir);
    const auto meta = scenario_metadata("simulate", a, sc);

    save_scenario(dir / "scenario.json", sc);

    {
        auto out = open_out(dir / "truth.tsv");
        write_metadata(out, meta);
        const auto shorts = sc.signal.short_segment_change_points(sc.short_min, sc.short_max, sc.theta);
        out << "window_index\tposition_bp\tshort_segment\n";
        for (const auto b : sc.signal.change_points(sc.theta)) {
            const bool is_short = std::find(shorts.begin(), shorts.end(), b) != shorts.end();
            out << b << '\t' << static_cast<std::int64_t>(b) * simulated_window_bp << '\t'
                << (is_short ? 1 : 0) << '\n';
        }
    }

    const int width = static_cast<int>(std::to_string(sc.replicates).size());
    for (const double sigma : sc.sigma_grid) {
        const fs::path sdir = dir / ("sigma_" + format_exact(sigma));
        for (std::size_t r = 1; r <= sc.replicates; ++r) {
            const auto rep = generate_replicate(sc, sigma, r);
            std::vector<RatioRecord> recs;
            recs.reserve(rep.series.size());
            const auto pos = rep.series.positions();
            const auto y = rep.series.values();
            for (std::size_t i = 0; i < y.size(); ++i) {
                recs.push_back({"sim", pos[i], pos[i] + simulated_window_bp, y[i]});
            }
            std::ostringstream name;
            name << "replicate_" << std::setw(width) << std::setfill('0') << r << ".tsv";
            auto out = open_out(sdir / name.str());
            Metadata m = meta;
            m.emplace_back("sigma", format_exact(sigma));
            m.emplace_back("replicate", std::to_string(r));
            m.emplace_back("replicate_seed", std::to_string(rep.seed));
            write_metadata(out, m);
            write_ratio_table(out, recs);
        }
    }
    return 0;
}

struct EvaluateArgs {
    ScenarioArgs scenario;
    std::vector<int> cstar_grid{1, 2};
    double rho = default_rho;
    std::string lambda = "auto";
    std::string sigma = "auto";
    std::size_t match_window = default_match_window;
    std::size_t threads = 1;
    double sweep_min = 0.1;
    double sweep_max = 3.0;
    std::size_t sweep_points = 30;
    bool roc = true;
};

std::vector<MethodConfig> methods_from(const EvaluateArgs& a) {
    std::vector<MethodConfig> methods;
    for (const int c : a.cstar_grid) {
        auto m = method_for_cstar(c);
        m.rho = a.rho;
        m.threshold.lambda = parse_auto(a.lambda, "--lambda");
        m.threshold.sigma = parse_auto(a.sigma, "--sigma");
        m.threshold.validate();
        methods.push_back(std::move(m));
    }
    if (methods.empty()) throw InputError("--cstar-grid must name at least one value");
    return methods;
}

int run_evaluate(const EvaluateArgs& a, bool roc_only) {
    const auto sc = resolve_scenario(a.scenario);
    const auto methods = methods_from(a);
    const EvalOptions opts{a.match_window, std::max<std::size_t>(1, a.threads)};
    const auto sweep = log_spaced(a.sweep_min, a.sweep_max, a.sweep_points);

    EvalReport report;
    if (roc_only) {
        report.scenario = sc;
        report.match_window = a.match_window;
        report.sweep = sweep;
        for (const auto& m : methods) {
            MethodReport mr;
            mr.method = m;
            for (const double sigma : sc.sigma_grid) mr.roc.push_back(roc_curve(sc, m, sigma, sweep, opts));
            report.methods.push_back(std::move(mr));
        }
    } else {
        report = a.roc ? evaluate(sc, methods, sweep, opts) : run_scenario(sc, methods, opts);
    }

    auto meta = scenario_metadata(roc_only ? "roc" : "evaluate", a.scenario, sc);
    meta.emplace_back("rho", format_exact(a.rho));
    meta.emplace_back("lambda", a.lambda);
    meta.emplace_back("sigma", a.sigma);
    meta.emplace_back("match_window", std::to_string(a.match_window));
    meta.emplace_back("sweep", format_exact(a.sweep_min) + ".." + format_exact(a.sweep_max) + " x" +
                                   std::to_string(a.sweep_points) + " log-spaced lambda scales");

    if (!roc_only) {
        auto metrics = open_out(with_suffix(a.scenario.out, ".metrics.tsv"));
        write_metrics_table(metrics, report, meta);
        auto reps = open_out(with_suffix(a.scenario.out, ".replicates.tsv"));
        write_replicate_table(reps, report, meta);
        auto json_out = open_out(with_suffix(a.scenario.out, ".report.json"));
        json_out << report_to_json(report, meta).dump(2) << '\n';
    }
    if (roc_only || a.roc) {
        auto roc = open_out(with_suffix(a.scenario.out, ".roc.tsv"));
        write_roc_table(roc, report, meta);
        auto auc = open_out(with_suffix(a.scenario.out, ".auc.tsv"));
        write_metadata(auc, meta);
        auc << "sigma\tmethod\tauc\tpartial_auc_fp20\n";
        for (const auto& mr : report.methods) {
            for (const auto& r : mr.roc) {
                auc << format_exact(r.sigma) << '\t' << mr.method.name << '\t' << format_exact(r.auc)
                    << '\t' << format_exact(r.partial_auc) << '\n';
            }
        }
    }
    return 0;
}

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a, const Defaults& d) {
    cmd->add_option("--scenario", a.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", a.out, "Output directory (simulate) or file prefix")->required();
    cmd->add_option("--seed", a.seed, "Override base_seed");
    cmd->add_option("--replicates", a.replicates, "Override replicate count");
    cmd->add_option("--noise", a.noise, "gaussian | contaminated")
        ->check(CLI::IsMember({"gaussian", "contaminated"}));
    cmd->add_option("--alpha", a.alpha, "Contamination probability")->default_str(format_exact(d.alpha));
    cmd->add_option("--inflation", a.inflation, "Contaminant sd multiplier")
        ->default_str(format_exact(d.inflation));
    cmd->add_option("--theta", a.theta, "Height tolerance defining true change-points");
    cmd->add_option("--sigma-grid", a.sigma_grid, "Comma-separated noise levels")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    Defaults defaults;
    try {
        defaults = load_defaults();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"Tail-greedy unbalanced Haar segmentation of copy-number ratios"};
    app.set_version_flag("--version", TGUHM_VERSION);
    app.require_subcommand(1);

    SegmentArgs seg;
    seg.rho = defaults.rho;
    seg.c_star = defaults.c_star;
    seg.theta = defaults.theta;
    auto* seg_cmd = app.add_subcommand("segment", "Segment a ratio table chromosome by chromosome");
    seg_cmd->add_option("--in", seg.input, "Tab-separated ratio table")->required()->check(CLI::ExistingFile);
    seg_cmd->add_option("--out", seg.out, "Output prefix")->required();
    seg_cmd->add_option("--rho", seg.rho, "Merge proportion per pass")->capture_default_str();
    seg_cmd->add_option("--cstar", seg.c_star, "Minimum arm length")->capture_default_str();
    seg_cmd->add_option("--lambda", seg.lambda, "Threshold or 'auto'")->capture_default_str();
    seg_cmd->add_option("--sigma", seg.sigma, "Noise level or 'auto'")->capture_default_str();
    seg_cmd->add_option("--theta", seg.theta, "Gain/loss call tolerance")->capture_default_str();
    seg_cmd->add_flag("--whole-genome", seg.whole_genome, "Segment all chromosomes as one series");

    ScenarioArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Write replicate data sets for a scenario");
    add_scenario_options(sim_cmd, sim, defaults);

    EvaluateArgs ev;
    ev.rho = defaults.rho;
    ev.match_window = defaults.match_window;
    ev.threads = defaults.threads;
    if (defaults.c_star != 2) ev.cstar_grid = {1, defaults.c_star};
    EvaluateArgs roc = ev;

    const auto add_eval_options = [&](CLI::App* cmd, EvaluateArgs& a, bool with_roc_flag) {
        add_scenario_options(cmd, a.scenario, defaults);
        cmd->add_option("--cstar-grid", a.cstar_grid, "Comma-separated c* values")
            ->delimiter(',')
            ->capture_default_str();
        cmd->add_option("--rho", a.rho, "Merge proportion per pass")->capture_default_str();
        cmd->add_option("--lambda", a.lambda, "Threshold or 'auto'")->capture_default_str();
        cmd->add_option("--sigma", a.sigma, "Noise level or 'auto'")->capture_default_str();
        cmd->add_option("--match-window", a.match_window, "TP matching window")->capture_default_str();
        cmd->add_option("--threads", a.threads, "Worker threads")->capture_default_str();
        cmd->add_option("--sweep-min", a.sweep_min, "Smallest lambda scale")->capture_default_str();
        cmd->add_option("--sweep-max", a.sweep_max, "Largest lambda scale")->capture_default_str();
        cmd->add_option("--sweep-points", a.sweep_points, "Number of lambda scales")->capture_default_str();
        if (with_roc_flag) {
            cmd->add_flag("!--no-roc", a.roc, "Skip the ROC sweep");
        }
    };
    auto* ev_cmd = app.add_subcommand("evaluate", "Score c* variants on a simulated scenario");
    add_eval_options(ev_cmd, ev, true);
    auto* roc_cmd = app.add_subcommand("roc", "Trace ROC curves over a lambda sweep");
    add_eval_options(roc_cmd, roc, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*seg_cmd) return run_segment(seg);
        if (*sim_cmd) return run_simulate(sim);
        if (*ev_cmd) return run_evaluate(ev, false);
        if (*roc_cmd) return run_evaluate(roc, true);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ContractError& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
