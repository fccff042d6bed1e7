#pragma once

#include <filesystem>
#include <iosfwd>

#include "json.hpp"

#include "tguhm/evaluation.hpp"
#include "tguhm/io.hpp"
#include "tguhm/simulation.hpp"

namespace tguhm {

/// Scenario documents are JSON objects:
///
///   {
///     "signal": "F1"  |  {"lengths": [...], "levels": [...]},
///     "noise": "gaussian" | "contaminated",
///     "sigma_grid": [0.1, 0.2],
///     "alpha": 0.05, "inflation": 3.0,
///     "replicates": 200, "base_seed": 42,
///     "short_segment_range": [6, 10], "theta": 0.1
///   }
///
/// Only "signal" is required. Unknown keys and ill-typed values raise
/// InputError naming the key.
SimulationScenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const SimulationScenario& scenario);

SimulationScenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const SimulationScenario& scenario);

nlohmann::json report_to_json(const EvalReport& report, const Metadata& meta);

/// Long format: sigma, method, c_star, metric, value. Metrics are aTPR, aFPR,
/// aTPRsh (NA when the truth has no short segments), aMSE, mean_FP, and, when
/// ROC curves are present, AUC and pAUC_FP20.
void write_metrics_table(std::ostream& out, const EvalReport& report, const Metadata& meta);

/// Columns: sigma, method, scale, mean_fpr, mean_tpr, mean_fp_count.
void write_roc_table(std::ostream& out, const EvalReport& report, const Metadata& meta);

/// Columns: sigma, method, replicate, tp, fp, fn, tpr, fpr, tpr_short, mse.
void write_replicate_table(std::ostream& out, const EvalReport& report, const Metadata& meta);

}  // namespace tguhm
