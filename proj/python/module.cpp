#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tguhm/error.hpp"
#include "tguhm/evaluation.hpp"
#include "tguhm/reconstruct.hpp"
#include "tguhm/report_io.hpp"
#include "tguhm/simulation.hpp"
#include "tguhm/threshold.hpp"
#include "tguhm/transform.hpp"

namespace py = pybind11;
using namespace tguhm;

namespace {

Series as_series(std::vector<double> y) { return Series::from_values(std::move(y)); }

ThresholdConfig make_config(int c_star, std::optional<double> lambda, std::optional<double> sigma,
                            double lambda_constant) {
    ThresholdConfig cfg;
    cfg.c_star = c_star;
    cfg.lambda = lambda;
    cfg.sigma = sigma;
    cfg.lambda_constant = lambda_constant;
    cfg.validate();
    return cfg;
}

SimulationScenario parse_scenario(const std::string& doc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(e.what());
    }
    return scenario_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_tguhm, m) {
    m.doc() = "Tail-greedy unbalanced Haar segmentation with two-stage thresholding";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

    m.attr("default_rho") = default_rho;

    py::class_<DetailCoefficient>(m, "DetailCoefficient")
        .def_readonly("scale", &DetailCoefficient::scale)
        .def_readonly("within_scale_index", &DetailCoefficient::within_scale_index)
        .def_readonly("s", &DetailCoefficient::s)
        .def_readonly("b", &DetailCoefficient::b)
        .def_readonly("e", &DetailCoefficient::e)
        .def_readonly("value", &DetailCoefficient::value)
        .def_readonly("left_weight", &DetailCoefficient::left_weight)
        .def_readonly("right_weight", &DetailCoefficient::right_weight)
        .def_property_readonly("left_child",
                               [](const DetailCoefficient& d) -> std::optional<std::size_t> {
                                   if (d.left_child == no_child) return std::nullopt;
                                   return d.left_child;
                               })
        .def_property_readonly("right_child",
                               [](const DetailCoefficient& d) -> std::optional<std::size_t> {
                                   if (d.right_child == no_child) return std::nullopt;
                                   return d.right_child;
                               })
        .def("__repr__", [](const DetailCoefficient& d) {
            return "DetailCoefficient(s=" + std::to_string(d.s) + ", b=" + std::to_string(d.b) +
                   ", e=" + std::to_string(d.e) + ", value=" + std::to_string(d.value) + ")";
        });

    py::class_<MergeTree>(m, "MergeTree")
        .def_readonly("details", &MergeTree::details)
        .def_readonly("root_smooth", &MergeTree::root_smooth)
        .def_readonly("n", &MergeTree::n)
        .def_readonly("rho", &MergeTree::rho);

    py::class_<SurvivorSet>(m, "SurvivorSet")
        .def_readonly("stage1_kept", &SurvivorSet::stage1_kept)
        .def_readonly("kept", &SurvivorSet::kept);

    py::class_<ThresholdResult>(m, "ThresholdResult")
        .def_readonly("survivors", &ThresholdResult::survivors)
        .def_readonly("sigma", &ThresholdResult::sigma)
        .def_readonly("lambda_", &ThresholdResult::lambda)
        .def_readonly("sigma_estimated", &ThresholdResult::sigma_estimated)
        .def_readonly("zero_sigma", &ThresholdResult::zero_sigma);

    py::class_<Segmentation>(m, "Segmentation")
        .def_readonly("change_points", &Segmentation::change_points)
        .def_readonly("segment_bounds", &Segmentation::segment_bounds)
        .def_readonly("segment_means", &Segmentation::segment_means)
        .def_readonly("fitted", &Segmentation::fitted);

    py::class_<SegmentDiagnostics>(m, "SegmentDiagnostics")
        .def_readonly("sigma", &SegmentDiagnostics::sigma)
        .def_readonly("lambda_", &SegmentDiagnostics::lambda)
        .def_readonly("sigma_estimated", &SegmentDiagnostics::sigma_estimated)
        .def_readonly("zero_sigma", &SegmentDiagnostics::zero_sigma)
        .def_readonly("details", &SegmentDiagnostics::details)
        .def_readonly("stage1_survivors", &SegmentDiagnostics::stage1_survivors)
        .def_readonly("survivors", &SegmentDiagnostics::survivors);

    py::class_<SegmentResult>(m, "SegmentResult")
        .def_readonly("segmentation", &SegmentResult::segmentation)
        .def_readonly("diagnostics", &SegmentResult::diagnostics)
        .def_property_readonly("change_points", [](const SegmentResult& r) { return r.segmentation.change_points; })
        .def_property_readonly("fitted", [](const SegmentResult& r) { return r.segmentation.fitted; });

    py::class_<MatchResult>(m, "MatchResult")
        .def_readonly("tp", &MatchResult::tp)
        .def_readonly("fp", &MatchResult::fp)
        .def_readonly("fn", &MatchResult::fn)
        .def_readonly("matched_pairs", &MatchResult::matched_pairs)
        .def_readonly("total_distance", &MatchResult::total_distance)
        .def_readonly("tpr", &MatchResult::tpr)
        .def_readonly("fpr", &MatchResult::fpr);

    py::class_<PiecewiseSignal>(m, "PiecewiseSignal")
        .def(py::init([](std::vector<std::size_t> lengths, std::vector<double> levels) {
                 PiecewiseSignal s{std::move(lengths), std::move(levels)};
                 s.validate();
                 return s;
             }),
             py::arg("lengths"), py::arg("levels"))
        .def_readonly("lengths", &PiecewiseSignal::lengths)
        .def_readonly("levels", &PiecewiseSignal::levels)
        .def("__len__", &PiecewiseSignal::size)
        .def("values", &PiecewiseSignal::values)
        .def("change_points", &PiecewiseSignal::change_points, py::arg("theta") = default_theta)
        .def("short_segment_change_points", &PiecewiseSignal::short_segment_change_points,
             py::arg("min_length") = 6, py::arg("max_length") = 10, py::arg("theta") = default_theta);

    m.def("local_average", [](std::vector<double> y, std::size_t s, std::size_t e) {
        return local_average(as_series(std::move(y)), s, e);
    }, py::arg("y"), py::arg("s"), py::arg("e"));
    m.def("detail_value", [](std::vector<double> y, std::size_t s, std::size_t b, std::size_t e) {
        return detail_value(as_series(std::move(y)), s, b, e);
    }, py::arg("y"), py::arg("s"), py::arg("b"), py::arg("e"));
    m.def("forward_transform", [](std::vector<double> y, double rho) {
        return forward_transform(as_series(std::move(y)), rho);
    }, py::arg("y"), py::arg("rho") = default_rho);

    m.def("estimate_sigma", [](std::vector<double> y) { return estimate_sigma(as_series(std::move(y))); },
          py::arg("y"));
    m.def("default_lambda", &default_lambda, py::arg("sigma"), py::arg("n"), py::arg("lambda_constant") = 1.01);
    m.def("connected_threshold", &connected_threshold, py::arg("tree"), py::arg("lambda_"));
    m.def("unconnected_threshold", &unconnected_threshold, py::arg("tree"), py::arg("stage1"), py::arg("c_star"));
    m.def("threshold",
          [](const MergeTree& tree, std::vector<double> y, int c_star, std::optional<double> lambda,
             std::optional<double> sigma, double lambda_constant) {
              return threshold(tree, make_config(c_star, lambda, sigma, lambda_constant), as_series(std::move(y)));
          },
          py::arg("tree"), py::arg("y"), py::arg("c_star") = 2, py::arg("lambda_") = py::none(),
          py::arg("sigma") = py::none(), py::arg("lambda_constant") = 1.01);

    m.def("fit_segments", [](std::vector<double> y, const std::vector<std::size_t>& cps) {
        return fit_segments(as_series(std::move(y)), cps);
    }, py::arg("y"), py::arg("change_points"));
    m.def("segment",
          [](std::vector<double> y, int c_star, std::optional<double> lambda, std::optional<double> sigma,
             double rho, double lambda_constant) {
              const auto series = as_series(std::move(y));
              const auto cfg = make_config(c_star, lambda, sigma, lambda_constant);
              py::gil_scoped_release release;
              return segment(series, cfg, rho);
          },
          py::arg("y"), py::arg("c_star") = 2, py::arg("lambda_") = py::none(), py::arg("sigma") = py::none(),
          py::arg("rho") = default_rho, py::arg("lambda_constant") = 1.01);

    m.def("builtin_signal", [](const std::string& id) { return builtin_signal(id); }, py::arg("id"));
    m.def("builtin_signal_ids", &builtin_signal_ids);
    m.def("derive_seed", &derive_seed, py::arg("base_seed"), py::arg("stream"));
    m.def("sample_noise",
          [](std::size_t n, std::uint64_t seed, double sigma, const std::string& kind, double alpha,
             double inflation) {
              NoiseModel model;
              model.kind = parse_noise_kind(kind);
              model.sigma = sigma;
              model.contamination_prob = alpha;
              model.inflation = inflation;
              return sample_noise(model, n, seed);
          },
          py::arg("n"), py::arg("seed"), py::arg("sigma") = 0.1, py::arg("kind") = "gaussian",
          py::arg("alpha") = 0.05, py::arg("inflation") = 3.0);
    m.def("generate_replicate",
          [](const std::string& scenario_json, double sigma, std::size_t r) {
              const auto rep = generate_replicate(parse_scenario(scenario_json), sigma, r);
              const auto y = rep.series.values();
              return py::make_tuple(std::vector<double>(y.begin(), y.end()), rep.truth, rep.true_change_points,
                                    rep.seed);
          },
          py::arg("scenario_json"), py::arg("sigma"), py::arg("r"));

    m.def("match_change_points",
          [](const std::vector<std::size_t>& truth, const std::vector<std::size_t>& est, std::size_t n,
             std::size_t window) { return match_change_points(truth, est, n, window); },
          py::arg("truth"), py::arg("estimated"), py::arg("n"), py::arg("window") = default_match_window);
    m.def("short_segment_tpr",
          [](const PiecewiseSignal& signal, const MatchResult& match, std::size_t min_length,
             std::size_t max_length, double theta) {
              return short_segment_tpr(signal, match, min_length, max_length, theta);
          },
          py::arg("signal"), py::arg("match"), py::arg("min_length") = 6, py::arg("max_length") = 10,
          py::arg("theta") = default_theta);
    m.def("mse", [](const std::vector<double>& fitted, const std::vector<double>& truth) {
        return mse(fitted, truth);
    }, py::arg("fitted"), py::arg("truth"));
    m.def("log_spaced", &log_spaced, py::arg("lo"), py::arg("hi"), py::arg("n"));

    m.def("evaluate_json",
          [](const std::string& scenario_json, const std::vector<int>& c_stars, const std::vector<double>& sweep,
             std::optional<double> lambda, std::size_t match_window, std::size_t threads) {
              const auto sc = parse_scenario(scenario_json);
              std::vector<MethodConfig> methods;
              for (int c : c_stars) {
                  auto mc = method_for_cstar(c);
                  mc.threshold.lambda = lambda;
                  mc.threshold.validate();
                  methods.push_back(mc);
              }
              EvalOptions opts;
              opts.match_window = match_window;
              opts.threads = threads;
              EvalReport report;
              {
                  py::gil_scoped_release release;
                  report = sweep.empty() ? run_scenario(sc, methods, opts) : evaluate(sc, methods, sweep, opts);
              }
              return report_to_json(report, {}).dump();
          },
          py::arg("scenario_json"), py::arg("c_stars"), py::arg("sweep"), py::arg("lambda_") = py::none(),
          py::arg("match_window") = default_match_window, py::arg("threads") = 1);
}
