#include "tguhm/report_io.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "tguhm/error.hpp"

namespace tguhm {

using nlohmann::json;

namespace {

const std::set<std::string>& scenario_keys() {
    static const std::set<std::string> keys{"signal",     "noise",      "sigma_grid",
                                            "alpha",      "inflation",  "replicates",
                                            "base_seed",  "short_segment_range", "theta"};
    return keys;
}

template <class T>
T get_as(const json& doc, const std::string& key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError("scenario key '" + key + "': " + e.what());
    }
}

std::string na_or(const std::optional<double>& v) { return v ? format_exact(*v) : "NA"; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

SimulationScenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw InputError("scenario document must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (!scenario_keys().count(key)) throw InputError("scenario key '" + key + "' is not recognised");
    }
    if (!doc.contains("signal")) throw InputError("scenario key 'signal' is required");

    SimulationScenario sc;
    const auto& sig = doc.at("signal");
    if (sig.is_string()) {
        sc.signal_id = sig.get<std::string>();
        try {
            sc.signal = builtin_signal(sc.signal_id);
        } catch (const InputError& e) {
            throw InputError(std::string("scenario key 'signal': ") + e.what());
        }
    } else if (sig.is_object()) {
        for (const auto& [key, _] : sig.items()) {
            if (key != "lengths" && key != "levels") {
                throw InputError("scenario key 'signal." + key + "' is not recognised");
            }
        }
        try {
            sc.signal.lengths = sig.at("lengths").get<std::vector<std::size_t>>();
            sc.signal.levels = sig.at("levels").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw InputError(std::string("scenario key 'signal': ") + e.what());
        }
    } else {
        throw InputError("scenario key 'signal' must be a built-in id or an object");
    }

    if (doc.contains("noise")) {
        try {
            sc.noise.kind = parse_noise_kind(get_as<std::string>(doc, "noise"));
        } catch (const InputError& e) {
            throw InputError(std::string("scenario key 'noise': ") + e.what());
        }
    }
    if (doc.contains("sigma_grid")) sc.sigma_grid = get_as<std::vector<double>>(doc, "sigma_grid");
    if (doc.contains("alpha")) sc.noise.contamination_prob = get_as<double>(doc, "alpha");
    if (doc.contains("inflation")) sc.noise.inflation = get_as<double>(doc, "inflation");
    if (doc.contains("replicates")) sc.replicates = get_as<std::size_t>(doc, "replicates");
    if (doc.contains("base_seed")) sc.base_seed = get_as<std::uint64_t>(doc, "base_seed");
    if (doc.contains("theta")) sc.theta = get_as<double>(doc, "theta");
    if (doc.contains("short_segment_range")) {
        const auto range = get_as<std::vector<std::size_t>>(doc, "short_segment_range");
        if (range.size() != 2) throw InputError("scenario key 'short_segment_range' needs two entries");
        sc.short_min = range[0];
        sc.short_max = range[1];
    }
    if (!sc.sigma_grid.empty()) sc.noise.sigma = sc.sigma_grid.front();
    sc.validate();
    return sc;
}

json scenario_to_json(const SimulationScenario& sc) {
    json doc;
    if (!sc.signal_id.empty()) {
        doc["signal"] = sc.signal_id;
    } else {
        doc["signal"] = {{"lengths", sc.signal.lengths}, {"levels", sc.signal.levels}};
    }
    doc["noise"] = std::string(to_string(sc.noise.kind));
    doc["sigma_grid"] = sc.sigma_grid;
    doc["alpha"] = sc.noise.contamination_prob;
    doc["inflation"] = sc.noise.inflation;
    doc["replicates"] = sc.replicates;
    doc["base_seed"] = sc.base_seed;
    doc["short_segment_range"] = {sc.short_min, sc.short_max};
    doc["theta"] = sc.theta;
    return doc;
}

SimulationScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

void save_scenario(const std::filesystem::path& path, const SimulationScenario& scenario) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write scenario " + path.string());
    out << scenario_to_json(scenario).dump(2) << '\n';
}

json report_to_json(const EvalReport& report, const Metadata& meta) {
    json doc;
    json m = json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    doc["metadata"] = m;
    doc["scenario"] = scenario_to_json(report.scenario);
    doc["match_window"] = report.match_window;
    doc["sweep"] = report.sweep;
    doc["methods"] = json::array();
    for (const auto& mr : report.methods) {
        json jm;
        jm["name"] = mr.method.name;
        jm["c_star"] = mr.method.threshold.c_star;
        jm["rho"] = mr.method.rho;
        jm["lambda"] = optional_json(mr.method.threshold.lambda);
        jm["sigma"] = optional_json(mr.method.threshold.sigma);
        jm["per_sigma"] = json::array();
        for (const auto& s : mr.per_sigma) {
            json js{{"sigma", s.sigma},
                    {"aTPR", s.atpr},
                    {"aFPR", s.afpr},
                    {"aTPRsh", optional_json(s.atpr_short)},
                    {"aMSE", s.amse},
                    {"mean_FP", s.mean_fp}};
            json reps = json::array();
            for (const auto& r : s.replicates) {
                reps.push_back({{"replicate", r.replicate},
                                {"tp", r.tp},
                                {"fp", r.fp},
                                {"fn", r.fn},
                                {"tpr", r.tpr},
                                {"fpr", r.fpr},
                                {"tpr_short", optional_json(r.tpr_short)},
                                {"mse", r.mse}});
            }
            js["replicates"] = std::move(reps);
            jm["per_sigma"].push_back(std::move(js));
        }
        jm["roc"] = json::array();
        for (const auto& roc : mr.roc) {
            json jr{{"sigma", roc.sigma}, {"auc", roc.auc}, {"partial_auc", roc.partial_auc}};
            jr["points"] = json::array();
            for (const auto& p : roc.points) {
                jr["points"].push_back({{"scale", p.scale},
                                        {"mean_fpr", p.mean_fpr},
                                        {"mean_tpr", p.mean_tpr},
                                        {"mean_fp_count", p.mean_fp_count}});
            }
            jm["roc"].push_back(std::move(jr));
        }
        doc["methods"].push_back(std::move(jm));
    }
    return doc;
}

void write_metrics_table(std::ostream& out, const EvalReport& report, const Metadata& meta) {
    write_metadata(out, meta);
    out << "sigma\tmethod\tc_star\tmetric\tvalue\n";
    for (std::size_t si = 0; si < report.scenario.sigma_grid.size(); ++si) {
        for (const auto& mr : report.methods) {
            const auto& s = mr.per_sigma.at(si);
            const auto prefix = format_exact(s.sigma) + '\t' + mr.method.name + '\t' +
                                std::to_string(mr.method.threshold.c_star) + '\t';
            out << prefix << "aTPR\t" << format_exact(s.atpr) << '\n';
            out << prefix << "aFPR\t" << format_exact(s.afpr) << '\n';
            out << prefix << "aTPRsh\t" << na_or(s.atpr_short) << '\n';
            out << prefix << "aMSE\t" << format_exact(s.amse) << '\n';
            out << prefix << "mean_FP\t" << format_exact(s.mean_fp) << '\n';
            if (si < mr.roc.size()) {
                out << prefix << "AUC\t" << format_exact(mr.roc[si].auc) << '\n';
                out << prefix << "pAUC_FP20\t" << format_exact(mr.roc[si].partial_auc) << '\n';
            }
        }
    }
}

void write_roc_table(std::ostream& out, const EvalReport& report, const Metadata& meta) {
    write_metadata(out, meta);
    out << "sigma\tmethod\tscale\tmean_fpr\tmean_tpr\tmean_fp_count\n";
    for (const auto& mr : report.methods) {
        for (const auto& roc : mr.roc) {
            for (const auto& p : roc.points) {
                out << format_exact(roc.sigma) << '\t' << mr.method.name << '\t' << format_exact(p.scale)
                    << '\t' << format_exact(p.mean_fpr) << '\t' << format_exact(p.mean_tpr) << '\t'
                    << format_exact(p.mean_fp_count) << '\n';
            }
        }
    }
}

void write_replicate_table(std::ostream& out, const EvalReport& report, const Metadata& meta) {
    write_metadata(out, meta);
    out << "sigma\tmethod\treplicate\ttp\tfp\tfn\ttpr\tfpr\ttpr_short\tmse\n";
    for (const auto& mr : report.methods) {
        for (const auto& s : mr.per_sigma) {
            for (const auto& r : s.replicates) {
                out << format_exact(s.sigma) << '\t' << mr.method.name << '\t' << r.replicate << '\t'
                    << r.tp << '\t' << r.fp << '\t' << r.fn << '\t' << format_exact(r.tpr) << '\t'
                    << format_exact(r.fpr) << '\t' << na_or(r.tpr_short) << '\t' << format_exact(r.mse)
                    << '\n';
            }
        }
    }
}

}  // namespace tguhm
