#include "gsmooth/bounds.hpp"
#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/harness.hpp"
#include "gsmooth/io.hpp"
#include "gsmooth/smoothing.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace gsmooth;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    double budget_scale = 1.0;
    unsigned workers = 0;
};

void add_common(CLI::App* app, Common& c, bool with_config) {
    if (with_config) app->add_option("--config", c.config, "experiment JSON (path, or - for stdin)")->required();
    app->add_option("--seed", c.seed, "seed, overriding the config");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--budget-scale", c.budget_scale, "multiplier for Monte Carlo budgets")
        ->check(CLI::PositiveNumber);
    app->add_option("--workers", c.workers, "worker threads (0 = hardware concurrency)");
}

ExperimentConfig load_config(const Common& c) {
    Json j;
    fs::path base;
    try {
        if (c.config == "-") {
            j = Json::parse(std::cin);
        } else {
            std::ifstream in(c.config);
            require(static_cast<bool>(in), ErrorKind::Config, "cannot open config " + c.config);
            j = Json::parse(in);
            base = fs::path(c.config).parent_path();
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, std::string("invalid JSON: ") + e.what());
    }
    if (c.seed && j.is_object()) j["seed"] = *c.seed;
    auto cfg = parse_config(j, base);
    const auto scale = [&](std::size_t n) {
        return std::max<std::size_t>(100, static_cast<std::size_t>(std::llround(static_cast<double>(n) * c.budget_scale)));
    };
    cfg.samples = scale(cfg.samples);
    cfg.paths = scale(cfg.paths);
    cfg.optimizer.workers = c.workers;
    return cfg;
}

void write_text(const fs::path& file, const std::string& text) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Config, "cannot write " + file.string());
    out << text;
}

/// JSON to stdout, or `name` under --out.
void emit(const Common& c, const std::string& name, const Json& j) {
    const std::string text = j.dump(2) + "\n";
    if (c.out.empty()) std::cout << text;
    else write_text(fs::path(c.out) / name, text);
}

int run_bound(const Common& c, bool force_optimize) {
    const auto cfg = load_config(c);
    const auto in = theorem_inputs(cfg);
    if (cfg.params && !force_optimize) {
        const auto [e, d, t, g] = *cfg.params;
        const auto b = evaluate_objective(in, cfg.objective, e, d, t, g);
        Json j{{"objective", std::string(to_string(cfg.objective))}, {"breakdown", to_json(b)}};
        if (cfg.kappa_order_only) j["flags"] = Json::array({"kappa_order_only"});
        emit(c, "bound.json", j);
        return 0;
    }
    const auto res = optimize_bound(in, cfg.objective, cfg.box, cfg.optimizer);
    Json j{{"objective", std::string(to_string(cfg.objective))}, {"search", to_json(cfg.box)}, {"result", to_json(res)}};
    if (cfg.kappa_order_only) j["flags"] = Json::array({"kappa_order_only"});
    emit(c, force_optimize ? "optimize.json" : "bound.json", j);
    if (!c.out.empty()) write_text(fs::path(c.out) / "trace.csv", trace_csv(res.trace));
    return 0;
}

int run_rates(double p, double horizon, std::optional<double> n) {
    const double nn = n.value_or(1e6);
    const auto ind = example_rate_params(p, horizon, nn);
    const auto lip = example_lipschitz_params(p, nn);
    Json j{{"p", p}, {"horizon", horizon}, {"n", nn}, {"indicator", to_json(ind)}, {"lipschitz", to_json(lip)}};
    std::cout << j.dump(2) << "\n";
    if (ind.exponent) {
        std::cout << "indicator rate: n^-(" << ind.exponent->str() << ") sqrt(log n)";
        std::cout << ", limit " << ind.exponent_limit.str();
        std::cout << "\n";
    }
    if (lip.exponent) {
        std::cout << "lipschitz rate: n^-(" << lip.exponent->str() << ") sqrt(log n)";
        std::cout << ", limit " << lip.exponent_limit.str();
        std::cout << "\n";
    }
    return 0;
}

int run_simulate(const Common& c, std::size_t count, const std::string& process, std::size_t steps) {
    const auto cfg = load_config(c);
    std::vector<PiecewisePath> paths;
    paths.reserve(count);
    if (process == "brownian") {
        BrownianConfig bc;
        bc.dim = cfg.dim;
        bc.horizon = cfg.horizon;
        bc.grid = uniform_grid(cfg.horizon, steps);
        bc.seed = cfg.seed;
        for (std::size_t i = 0; i < count; ++i) paths.push_back(sample_bm(bc, i));
    } else {
        require(cfg.model.has_value(), ErrorKind::Config, "simulate needs a model in the config or --process brownian");
        for (std::size_t i = 0; i < count; ++i) {
            Rng rng(cfg.seed, i);
            paths.push_back(simulate_partial_sum(*cfg.model, rng));
        }
    }
    if (c.out.empty()) {
        require(count == 1, ErrorKind::Config, "several paths need --out");
        write_path_csv(std::cout, paths.front());
        return 0;
    }
    fs::create_directories(c.out);
    for (std::size_t i = 0; i < count; ++i) {
        std::ostringstream s;
        write_path_csv(s, paths[i]);
        std::ostringstream name;
        name << "path_" << std::setw(5) << std::setfill('0') << i << ".csv";
        write_text(fs::path(c.out) / name.str(), s.str());
    }
    return 0;
}

int run_smooth(const Common& c) {
    const auto cfg = load_config(c);
    require(cfg.smoothing.has_value(), ErrorKind::Config, "smooth needs a \"smoothing\" block");
    require(cfg.functional || cfg.set, ErrorKind::Config, "smooth needs a functional or a set");
    const Functional h = cfg.functional ? *cfg.functional : cfg.set->indicator;
    const PiecewisePath w = cfg.path ? *cfg.path : PiecewisePath::constant(std::vector<double>(cfg.dim, 0.0), cfg.horizon);
    const MonteCarlo mc{cfg.samples, cfg.seed, c.workers};
    const auto& p = *cfg.smoothing;
    Json j = Json::object();
    if (!h.certified()) j["flags"] = Json::array({"uncertified"});
    j["value"] = to_json(smooth_eval(h, w, p, mc), p, "value");
    if (!cfg.directions.empty()) {
        const std::string q = "derivative_" + std::to_string(cfg.directions.size());
        j["derivative"] = to_json(derivative_estimate(h, w, cfg.directions, p, mc), p, q);
        if (cfg.directions.size() == 2) {
            j["covariance"] = to_json(
                d2_covariance_estimate(h, w, cfg.directions[0], cfg.directions[1], p, mc), p, "covariance_2");
        }
        if (cfg.finite_difference) {
            j["finite_difference"] =
                to_json(finite_difference_estimate(h, w, cfg.directions, p, mc, cfg.fd_relative_step), p, q);
        }
    }
    emit(c, "smooth.json", j);
    return 0;
}

int run_validate(const Common& c, const std::string& suite) {
    ValidateOptions o;
    o.suite = parse_suite(suite);
    o.seed = c.seed.value_or(0);
    o.budget_scale = c.budget_scale;
    o.workers = c.workers;
    const auto report = run_validation(o);
    if (!c.out.empty()) write_report(report, c.out);
    for (const auto& r : report.rows) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  bound=" << format_double(r.bound)
                  << " empirical=" << format_double(r.empirical) << "\n";
    }
    std::cout << report.rows.size() - report.failures() << "/" << report.rows.size() << " rows passed\n";
    return report.passed() ? 0 : 1;
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Gaussian smoothing bounds for cadlag process approximation"};
    app.require_subcommand(1);
    Common common;

    auto* bound = app.add_subcommand("bound", "evaluate the bound at configured parameters, or optimize");
    add_common(bound, common, true);
    auto* optimize = app.add_subcommand("optimize", "minimize the bound over the search box");
    add_common(optimize, common, true);

    auto* rates = app.add_subcommand("rates", "closed-form parameters and rate exponents");
    double p = 3.0, horizon = 1.0;
    std::optional<double> n;
    rates->add_option("--p", p, "moment order")->check(CLI::Range(3.0, 1e6));
    rates->add_option("--T", horizon, "horizon")->check(CLI::PositiveNumber);
    rates->add_option("--n", n, "sample size (default 1e6)")->check(CLI::Range(2.0, 1e300));

    auto* simulate = app.add_subcommand("simulate", "write sampled paths as CSV");
    add_common(simulate, common, true);
    std::size_t count = 1, steps = 1024;
    std::string process = "model";
    simulate->add_option("--count", count, "number of paths")->check(CLI::PositiveNumber);
    simulate->add_option("--process", process, "model (from config) or brownian")
        ->check(CLI::IsMember({"model", "brownian"}));
    simulate->add_option("--steps", steps, "Brownian grid steps")->check(CLI::PositiveNumber);

    auto* smooth = app.add_subcommand("smooth", "estimate h_{eps,delta} and its derivatives");
    add_common(smooth, common, true);

    auto* validate = app.add_subcommand("validate", "run a validation suite");
    add_common(validate, common, false);
    std::string suite = "all";
    validate->add_option("--suite", suite, "rates, gaussian, tightness, smoothing, theorem or all")
        ->check(CLI::IsMember({"rates", "gaussian", "tightness", "smoothing", "theorem", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*bound) return run_bound(common, false);
        if (*optimize) return run_bound(common, true);
        if (*rates) return run_rates(p, horizon, n);
        if (*simulate) return run_simulate(common, count, process, steps);
        if (*smooth) return run_smooth(common);
        if (*validate) return run_validate(common, suite);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
