#include "gsmooth/bounds.hpp"
#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/harness.hpp"
#include "gsmooth/io.hpp"
#include "gsmooth/smoothing.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace gsmooth;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

/// (times, values) with values shaped (knots, dim).
py::tuple path_arrays(const PiecewisePath& w) {
    py::array_t<double> values({w.knot_count(), w.dim()});
    std::copy(w.values().begin(), w.values().end(), values.mutable_data());
    return py::make_tuple(to_array(w.times()), values);
}

ExperimentConfig load(const std::string& config_json, std::optional<std::uint64_t> seed, const std::string& base_dir) {
    Json j;
    try {
        j = Json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, std::string("invalid JSON: ") + e.what());
    }
    if (seed && j.is_object()) j["seed"] = *seed;
    return parse_config(j, base_dir);
}

std::string bound_json(const std::string& config_json, bool force_optimize, unsigned workers,
                       const std::string& base_dir) {
    auto cfg = load(config_json, std::nullopt, base_dir);
    cfg.optimizer.workers = workers;
    const auto in = theorem_inputs(cfg);
    Json j{{"objective", std::string(to_string(cfg.objective))}};
    if (cfg.params && !force_optimize) {
        const auto [e, d, t, g] = *cfg.params;
        j["breakdown"] = to_json(evaluate_objective(in, cfg.objective, e, d, t, g));
    } else {
        j["search"] = to_json(cfg.box);
        j["result"] = to_json(optimize_bound(in, cfg.objective, cfg.box, cfg.optimizer));
    }
    if (cfg.kappa_order_only) j["flags"] = Json::array({"kappa_order_only"});
    return j.dump();
}

std::string smooth_json(const std::string& config_json, unsigned workers, const std::string& base_dir) {
    const auto cfg = load(config_json, std::nullopt, base_dir);
    require(cfg.smoothing.has_value(), ErrorKind::Config, "smooth needs a \"smoothing\" block");
    require(cfg.functional || cfg.set, ErrorKind::Config, "smooth needs a functional or a set");
    const Functional h = cfg.functional ? *cfg.functional : cfg.set->indicator;
    const PiecewisePath w = cfg.path ? *cfg.path : PiecewisePath::constant(std::vector<double>(cfg.dim, 0.0), cfg.horizon);
    const MonteCarlo mc{cfg.samples, cfg.seed, workers};
    const auto& p = *cfg.smoothing;
    Json j = Json::object();
    if (!h.certified()) j["flags"] = Json::array({"uncertified"});
    j["value"] = to_json(smooth_eval(h, w, p, mc), p, "value");
    if (!cfg.directions.empty()) {
        const std::string q = "derivative_" + std::to_string(cfg.directions.size());
        j["derivative"] = to_json(derivative_estimate(h, w, cfg.directions, p, mc), p, q);
        if (cfg.directions.size() == 2) {
            j["covariance"] =
                to_json(d2_covariance_estimate(h, w, cfg.directions[0], cfg.directions[1], p, mc), p, "covariance_2");
        }
        if (cfg.finite_difference) {
            j["finite_difference"] =
                to_json(finite_difference_estimate(h, w, cfg.directions, p, mc, cfg.fd_relative_step), p, q);
        }
    }
    return j.dump();
}

std::string rates_json(double p, double horizon, double n) {
    Json j{{"p", p},
           {"horizon", horizon},
           {"n", n},
           {"indicator", to_json(example_rate_params(p, horizon, n))},
           {"lipschitz", to_json(example_lipschitz_params(p, n))}};
    return j.dump();
}

py::dict validate(const std::string& suite, std::uint64_t seed, double budget_scale, unsigned workers,
                  const std::string& out) {
    ValidateOptions o;
    o.suite = parse_suite(suite);
    o.seed = seed;
    o.budget_scale = budget_scale;
    o.workers = workers;
    Report report;
    {
        py::gil_scoped_release release;
        report = run_validation(o);
    }
    if (!out.empty()) write_report(report, out);
    py::dict d;
    d["report"] = report_json(report).dump();
    d["rows_csv"] = rows_csv(report);
    d["passed"] = report.passed();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian smoothing bounds for cadlag process approximation";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def("normal_cdf", &normal_cdf, py::arg("x"));
    m.def("bm_max_cdf", &bm_max_cdf, py::arg("y"), py::arg("horizon") = 1.0);
    m.def("bm_supnorm_tail", &bm_supnorm_tail, py::arg("z"), py::arg("dim") = 1, py::arg("horizon") = 1.0);
    m.def("c_eps_delta_T", &c_eps_delta_T, py::arg("epsilon"), py::arg("delta"), py::arg("horizon") = 1.0);
    m.def("derivative_constant", &derivative_constant, py::arg("k"));
    m.def("p2_partitions", &enumerate_p2_partitions, py::arg("n"));
    m.def(
        "rate_exponents",
        [](std::int64_t p) {
            const auto a = indicator_rate_exponent(p), b = lipschitz_rate_exponent(p);
            return py::make_tuple(a.str(), b.str());
        },
        py::arg("p"));

    m.def(
        "sample_bm",
        [](std::size_t steps, std::uint64_t seed, std::uint64_t index, std::size_t dim, double horizon) {
            BrownianConfig cfg;
            cfg.dim = dim;
            cfg.horizon = horizon;
            cfg.grid = uniform_grid(horizon, steps);
            cfg.seed = seed;
            return path_arrays(sample_bm(cfg, index));
        },
        py::arg("steps"), py::arg("seed"), py::arg("index") = 0, py::arg("dim") = 1, py::arg("horizon") = 1.0);

    m.def(
        "simulate_partial_sum",
        [](const std::string& model_json, std::uint64_t seed, std::uint64_t index, double horizon) {
            const auto model = model_from_json(Json::parse(model_json), horizon);
            Rng rng(seed, index);
            return path_arrays(simulate_partial_sum(model, rng));
        },
        py::arg("model_json"), py::arg("seed"), py::arg("index") = 0, py::arg("horizon") = 1.0);

    m.def(
        "read_path_csv",
        [](const std::string& text, double horizon, const std::string& mode) {
            std::istringstream in(text);
            return path_arrays(read_path_csv(in, horizon, parse_interpolation(mode)));
        },
        py::arg("text"), py::arg("horizon") = 1.0, py::arg("mode") = "step");
    m.def(
        "write_path_csv",
        [](std::vector<double> times, py::array_t<double, py::array::c_style | py::array::forcecast> values,
           double horizon) {
            require(values.ndim() == 2, ErrorKind::Shape, "values must be (knots, dim)");
            const auto dim = static_cast<std::size_t>(values.shape(1));
            std::vector<double> flat(values.data(), values.data() + values.size());
            std::ostringstream out;
            write_path_csv(out, PiecewisePath(dim, horizon, std::move(times), std::move(flat), Interpolation::Step));
            return out.str();
        },
        py::arg("times"), py::arg("values"), py::arg("horizon") = 1.0);

    m.def("rates_json", &rates_json, py::arg("p"), py::arg("horizon") = 1.0, py::arg("n") = 1e6);
    m.def("bound_json", &bound_json, py::arg("config_json"), py::arg("optimize") = false, py::arg("workers") = 0,
          py::arg("base_dir") = "");
    m.def("smooth_json", &smooth_json, py::arg("config_json"), py::arg("workers") = 0, py::arg("base_dir") = "");
    m.def("validate", &validate, py::arg("suite") = "all", py::arg("seed") = 0, py::arg("budget_scale") = 1.0,
          py::arg("workers") = 0, py::arg("out") = "");
}
