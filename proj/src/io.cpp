#include "gsmooth/io.hpp"

#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gsmooth {

namespace fs = std::filesystem;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    require(res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty(), ErrorKind::Config,
            "malformed number '" + std::string(text) + "'");
    return value;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

void write_path_csv(std::ostream& out, const PiecewisePath& path) {
    out << 't';
    for (std::size_t c = 0; c < path.dim(); ++c) out << ",v" << (c + 1);
    out << '\n';
    for (std::size_t k = 0; k < path.knot_count(); ++k) {
        out << format_double(path.times()[k]);
        for (double v : path.knot(k)) out << ',' << format_double(v);
        out << '\n';
    }
}

PiecewisePath read_path_csv(std::istream& in, double horizon, Interpolation mode) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::MalformedPath, "path CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_commas(line);
    require(header.size() >= 2 && header[0] == "t", ErrorKind::MalformedPath, "path CSV header must be t,v1,...,vd");
    const std::size_t dim = header.size() - 1;
    for (std::size_t c = 0; c < dim; ++c) {
        require(header[c + 1] == "v" + std::to_string(c + 1), ErrorKind::MalformedPath,
                "path CSV header must be t,v1,...,vd");
    }
    std::vector<double> times, values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        require(cells.size() == dim + 1, ErrorKind::MalformedPath,
                "path CSV line " + std::to_string(line_no) + " has the wrong number of fields");
        try {
            times.push_back(parse_double(cells[0]));
            for (std::size_t c = 0; c < dim; ++c) values.push_back(parse_double(cells[c + 1]));
        } catch (const Error& e) {
            fail(ErrorKind::MalformedPath, "path CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return PiecewisePath(dim, horizon, std::move(times), std::move(values), mode);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

Interpolation parse_interpolation(std::string_view name) {
    if (name == "step") return Interpolation::Step;
    if (name == "linear") return Interpolation::Linear;
    fail(ErrorKind::Config, "interpolation mode must be 'step' or 'linear'");
}

std::string_view to_string(Interpolation mode) noexcept { return mode == Interpolation::Step ? "step" : "linear"; }

// ---------------------------------------------------------------------------
// JSON records

namespace {

Json num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

} // namespace

Json to_json(const DerivativeEstimate& e, const SmoothingParams& params, std::string_view quantity) {
    Json j;
    j["quantity"] = quantity;
    j["estimate"] = num(e.estimate);
    j["std_error"] = num(e.std_error);
    j["n_samples"] = e.samples;
    j["seed"] = e.seed;
    j["params"] = {{"epsilon", params.epsilon}, {"delta", params.delta}, {"horizon", params.horizon},
                   {"dim", params.dim}};
    return j;
}

Json to_json(const BoundBreakdown& b) {
    Json j;
    j["epsilon"] = num(b.epsilon);
    j["delta"] = num(b.delta);
    j["theta"] = num(b.theta);
    j["gamma"] = num(b.gamma);
    j["stein"] = num(b.stein);
    j["smoothness"] = num(b.smoothness);
    j["x_tail"] = num(b.x_tail);
    j["z_tail"] = num(b.z_tail);
    j["bm"] = num(b.bm);
    j["boundary"] = num(b.boundary);
    j["total"] = num(b.total);
    j["objective"] = num(b.objective);
    j["presented"] = num(b.presented());
    j["vacuous"] = b.total > 1.0;
    return j;
}

Json to_json(const TailEnvelope& e) {
    Json j;
    j["lemma"] = e.source;
    Json params = Json::object();
    for (const auto& [k, v] : e.params) params[k] = num(v);
    j["params"] = params;
    j["validity"] = {{"eps_min_exclusive", num(e.eps_min)},
                     {"eps_max", num(e.eps_max)},
                     {"eps_max_inclusive", e.eps_max_inclusive}};
    return j;
}

Json to_json(const RateParams& r) {
    Json j;
    j["epsilon"] = num(r.epsilon);
    j["delta"] = num(r.delta);
    if (r.theta > 0.0) j["theta"] = num(r.theta);
    if (r.gamma > 0.0) j["gamma"] = num(r.gamma);
    j["rate"] = num(r.rate);
    j["exponent"] = r.exponent ? Json(r.exponent->str()) : Json(nullptr);
    j["exponent_limit"] = r.exponent_limit.str();
    return j;
}

Json to_json(const SearchBox& b) {
    return {{"epsilon", {num(b.eps_lo), num(b.eps_hi)}},
            {"delta", {num(b.delta_lo), num(b.delta_hi)}},
            {"theta", {num(b.theta_lo), num(b.theta_hi)}},
            {"gamma", {num(b.gamma_lo), num(b.gamma_hi)}}};
}

Json to_json(const OptimizeResult& r) {
    Json j;
    j["best"] = to_json(r.best);
    j["box"] = to_json(r.box);
    j["evaluations"] = r.trace.size();
    return j;
}

Json report_json(const Report& report) {
    Json j;
    j["schema"] = 1;
    j["suite"] = report.suite;
    j["seed"] = report.seed;
    j["budget_scale"] = num(report.budget_scale);
    j["summary"] = {{"rows", report.rows.size()},
                    {"passed", report.rows.size() - report.failures()},
                    {"failed", report.failures()}};
    Json rows = Json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"id", r.id},
                        {"quantity", r.quantity},
                        {"tag", to_string(r.tag)},
                        {"kind", to_string(r.kind)},
                        {"bound", num(r.bound)},
                        {"empirical", num(r.empirical)},
                        {"ci_lo", num(r.ci_lo)},
                        {"ci_hi", num(r.ci_hi)},
                        {"margin", num(r.margin)},
                        {"pass", r.pass},
                        {"note", r.note}});
    }
    j["rows"] = rows;
    j["exercised"] = Json(std::vector<std::string>(report.exercised.begin(), report.exercised.end()));
    j["notes"] = report.notes;
    return j;
}

std::string rows_csv(const Report& report) {
    std::ostringstream out;
    out << "id,quantity,tag,kind,bound,empirical,ci_lo,ci_hi,margin,pass,note\n";
    for (const auto& r : report.rows) {
        out << csv_escape(r.id) << ',' << csv_escape(r.quantity) << ',' << to_string(r.tag) << ','
            << to_string(r.kind) << ',' << format_double(r.bound) << ',' << format_double(r.empirical) << ','
            << format_double(r.ci_lo) << ',' << format_double(r.ci_hi) << ',' << format_double(r.margin) << ','
            << (r.pass ? "pass" : "fail") << ',' << csv_escape(r.note) << '\n';
    }
    return out.str();
}

namespace {

void trace_lines(std::ostream& out, std::string_view run, const std::vector<TracePoint>& trace) {
    for (const auto& p : trace) {
        out << csv_escape(run) << ',' << p.stage << ',' << format_double(p.epsilon) << ',' << format_double(p.delta)
            << ',' << format_double(p.theta) << ',' << format_double(p.gamma) << ',' << format_double(p.objective)
            << '\n';
    }
}

constexpr std::string_view kTraceHeader = "run,stage,epsilon,delta,theta,gamma,objective\n";

} // namespace

std::string trace_csv(const Report& report) {
    std::ostringstream out;
    out << kTraceHeader;
    for (const auto& t : report.traces) trace_lines(out, t.id, t.points);
    return out.str();
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
    std::ostringstream out;
    out << kTraceHeader;
    trace_lines(out, "optimize", trace);
    return out.str();
}

void write_report(const Report& report, const fs::path& dir) {
    fs::create_directories(dir / "plotdata");
    auto write = [](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        require(static_cast<bool>(f), ErrorKind::Config, "cannot write " + p.string());
        f << text;
    };
    write(dir / "report.json", report_json(report).dump(2) + "\n");
    write(dir / "rows.csv", rows_csv(report));
    write(dir / "trace.csv", trace_csv(report));
    for (const auto& [name, table] : report.plotdata) {
        std::ostringstream out;
        write_csv(out, table);
        write(dir / "plotdata" / (name + ".csv"), out.str());
    }
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

const Json& at(const Json& j, const char* key) {
    require(j.is_object() && j.contains(key), ErrorKind::Config, std::string("missing key '") + key + "'");
    return j.at(key);
}

double get_number(const Json& j, const char* key) {
    const Json& v = at(j, key);
    if (v.is_string()) return parse_double(v.get<std::string>());
    require(v.is_number(), ErrorKind::Config, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double get_number(const Json& j, const char* key, double fallback) {
    return j.is_object() && j.contains(key) ? get_number(j, key) : fallback;
}

std::size_t get_count(const Json& j, const char* key, std::size_t fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    require(v.is_number_unsigned() || (v.is_number() && v.get<double>() >= 0.0 &&
                                       v.get<double>() == std::floor(v.get<double>())),
            ErrorKind::Config, std::string("'") + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v.get<double>());
}

bool get_bool(const Json& j, const char* key, bool fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    require(j.at(key).is_boolean(), ErrorKind::Config, std::string("'") + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

std::string get_string(const Json& j, const char* key) {
    const Json& v = at(j, key);
    require(v.is_string(), ErrorKind::Config, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> get_vector(const Json& v, const char* what) {
    require(v.is_array(), ErrorKind::Config, std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
        require(x.is_number(), ErrorKind::Config, std::string(what) + " must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<double> vector_or_scalar(const Json& v, std::size_t dim, const char* what) {
    if (v.is_number()) return std::vector<double>(dim, v.get<double>());
    return get_vector(v, what);
}

} // namespace

Functional functional_from_json(const Json& j) {
    const std::string type = get_string(j, "type");
    if (type == "sup_indicator") {
        return Functional::sup_indicator(get_number(j, "level"), get_count(j, "coord", 0), get_bool(j, "strict", false));
    }
    if (type == "finite_dim") {
        std::vector<Halfspace> hs;
        const Json& list = at(j, "halfspaces");
        require(list.is_array(), ErrorKind::Config, "halfspaces must be an array");
        for (const auto& h : list) hs.push_back({get_vector(at(h, "a"), "halfspace normal"), get_number(h, "b")});
        return Functional::finite_dim_indicator(get_vector(at(j, "times"), "times"), std::move(hs),
                                                get_bool(j, "strict", false));
    }
    if (type == "smooth_cylinder") {
        const auto times = get_vector(at(j, "times"), "times");
        const Json& w = at(j, "weights");
        require(w.is_array() && w.size() == times.size(), ErrorKind::Config, "one weight entry per time");
        std::vector<std::vector<double>> weights;
        for (const auto& a : w) weights.push_back(a.is_number() ? std::vector<double>{a.get<double>()}
                                                                : get_vector(a, "weights"));
        return Functional::smooth_cylinder(times, std::move(weights), get_number(j, "offset", 0.0),
                                           get_number(j, "scale", 1.0));
    }
    if (type == "clamped_sup") {
        return Functional::clamped_sup_lipschitz(get_number(j, "level"), get_number(j, "slope", 1.0),
                                                 get_count(j, "coord", 0));
    }
    if (type == "constant") return Functional::constant(get_number(j, "value"));
    fail(ErrorKind::Config, "unknown functional type '" + type + "'");
}

SetK set_from_json(const Json& j) {
    std::optional<double> c;
    if (j.is_object() && j.contains("boundary_constant")) c = get_number(j, "boundary_constant");
    try {
        return SetK(functional_from_json(j), c);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        fail(ErrorKind::Config, std::string("invalid set: ") + e.what());
    }
}

ProcessModel model_from_json(const Json& j, double horizon) {
    ProcessModel m;
    m.horizon = horizon;
    const std::string type = get_string(j, "type");
    if (type == "iid") {
        IidPartialSum s;
        s.distribution = parse_innovation(get_string(j, "distribution"));
        s.n = get_count(j, "n", s.n);
        s.p = get_number(j, "p", s.p);
        s.nu = get_number(j, "nu", s.nu);
        m.variant = s;
    } else if (type == "mixing") {
        MixingSum s;
        s.rho = get_number(j, "rho", s.rho);
        s.n = get_count(j, "n", s.n);
        s.certificate.p = get_number(j, "p", s.certificate.p);
        s.certificate.c_p = get_number(j, "c_p", s.certificate.c_p);
        s.certificate.k = get_number(j, "k", s.certificate.k);
        s.certificate.b = get_number(j, "b", s.certificate.b);
        m.variant = s;
    } else {
        fail(ErrorKind::Config, "unknown model type '" + type + "'");
    }
    try {
        m.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("invalid model: ") + e.what());
    }
    return m;
}

TailEnvelope envelope_from_json(const Json& j, const ExperimentConfig& ctx) {
    const std::string type = get_string(j, "type");
    const double T = ctx.horizon;
    if (type == "zero") return TailEnvelope::zero();
    if (type == "model") {
        require(ctx.model.has_value(), ErrorKind::Config, "envelope type 'model' needs a model");
        std::optional<double> rosenthal;
        if (j.contains("rosenthal")) rosenthal = get_number(j, "rosenthal");
        return ctx.model->envelope(rosenthal);
    }
    if (type == "iid") {
        std::optional<double> rosenthal;
        if (j.contains("rosenthal")) rosenthal = get_number(j, "rosenthal");
        return TailEnvelope::iid(get_number(j, "p"), get_number(j, "abs_moment"), get_number(j, "n"), T, rosenthal);
    }
    if (type == "mixing") {
        MixingModel m;
        m.p = get_number(j, "p", m.p);
        m.c_p = get_number(j, "c_p", m.c_p);
        m.k = get_number(j, "k", m.k);
        m.b = get_number(j, "b", m.b);
        return TailEnvelope::mixing(m, get_number(j, "n"), T);
    }
    if (type == "gaussian") {
        return TailEnvelope::gaussian({get_number(j, "k", 1.0), get_number(j, "tau", 1.0)}, get_number(j, "gamma", 4.0),
                                      T);
    }
    if (type == "chaining") {
        ChentsovCondition c;
        c.K = get_number(j, "K");
        c.beta = get_number(j, "beta");
        c.gamma = get_number(j, "gamma");
        const std::string validity = j.contains("validity") ? get_string(j, "validity") : "all_scales";
        require(validity == "all_scales" || validity == "restricted", ErrorKind::Config,
                "validity must be 'all_scales' or 'restricted'");
        c.validity = validity == "restricted" ? Validity::Restricted : Validity::AllScales;
        const std::string form = j.contains("form") ? get_string(j, "form") : "single_increment";
        require(form == "single_increment" || form == "min_of_two", ErrorKind::Config,
                "form must be 'single_increment' or 'min_of_two'");
        c.form = form == "min_of_two" ? ConditionForm::MinOfTwo : ConditionForm::SingleIncrement;
        std::optional<DiscreteTail> phi;
        if (j.contains("phi") && !j.at("phi").is_null()) {
            const Json& p = j.at("phi");
            const std::string kind = get_string(p, "kind");
            if (kind == "power_law") phi = DiscreteTail::power_law(get_number(p, "c"), get_number(p, "p"), get_number(p, "n"));
            else if (kind == "jump") phi = DiscreteTail::jump(get_number(p, "c"), get_number(p, "p"), get_number(p, "n"));
            else fail(ErrorKind::Config, "phi kind must be 'power_law' or 'jump'");
        }
        return TailEnvelope::chaining(c, phi, get_number(j, "n", 1.0), T, ctx.dim);
    }
    fail(ErrorKind::Config, "unknown envelope type '" + type + "'");
}

PiecewisePath path_from_json(const Json& j, double horizon, std::size_t dim, const fs::path& base_dir) {
    const double T = get_number(j, "horizon", horizon);
    if (j.contains("csv")) {
        const fs::path p = base_dir / get_string(j, "csv");
        std::ifstream in(p);
        require(static_cast<bool>(in), ErrorKind::Config, "cannot open path CSV " + p.string());
        return read_path_csv(in, T, j.contains("mode") ? parse_interpolation(get_string(j, "mode")) : Interpolation::Step);
    }
    if (j.contains("indicator")) {
        const auto x = j.contains("x") ? vector_or_scalar(j.at("x"), dim, "x") : std::vector<double>(dim, 1.0);
        return PiecewisePath::indicator(get_number(j, "indicator"), T, x);
    }
    if (j.contains("indicator_difference")) {
        const auto st = get_vector(j.at("indicator_difference"), "indicator_difference");
        require(st.size() == 2, ErrorKind::Config, "indicator_difference needs [s, t]");
        const auto x = j.contains("x") ? vector_or_scalar(j.at("x"), dim, "x") : std::vector<double>(dim, 1.0);
        return PiecewisePath::indicator_difference(st[0], st[1], T, x);
    }
    if (j.contains("constant")) return PiecewisePath::constant(vector_or_scalar(j.at("constant"), dim, "constant"), T);
    const auto times = get_vector(at(j, "times"), "times");
    std::vector<double> values;
    for (const auto& v : at(j, "values")) {
        if (v.is_array()) {
            const auto row = get_vector(v, "values");
            values.insert(values.end(), row.begin(), row.end());
        } else {
            require(v.is_number(), ErrorKind::Config, "values must hold numbers");
            values.push_back(v.get<double>());
        }
    }
    const std::size_t d = times.empty() ? dim : values.size() / times.size();
    return PiecewisePath(d, T, times, values,
                         j.contains("mode") ? parse_interpolation(get_string(j, "mode")) : Interpolation::Step);
}

ExperimentConfig parse_config(const Json& j, const fs::path& base_dir) {
    require(j.is_object(), ErrorKind::Config, "config must be a JSON object");
    require(j.contains("schema") && j.at("schema").is_number_integer() && j.at("schema").get<int>() == 1,
            ErrorKind::Config, "config must declare \"schema\": 1");
    ExperimentConfig c;
    try {
        const Json& seed = at(j, "seed");
        require(seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0),
                ErrorKind::Config, "seed must be a nonnegative integer");
        c.seed = seed.get<std::uint64_t>();
        c.horizon = get_number(j, "horizon", 1.0);
        c.dim = get_count(j, "dim", 1);
        require(c.horizon > 0.0 && std::isfinite(c.horizon), ErrorKind::Config, "horizon must be positive");
        require(c.dim >= 1, ErrorKind::Config, "dim must be positive");
        if (j.contains("model")) c.model = model_from_json(j.at("model"), c.horizon);
        if (j.contains("set")) c.set = set_from_json(j.at("set"));
        if (j.contains("functional")) c.functional = functional_from_json(j.at("functional"));
        if (j.contains("objective")) {
            const std::string o = get_string(j, "objective");
            if (o == "indicator") c.objective = Objective::Indicator;
            else if (o == "lp") c.objective = Objective::LevyProkhorov;
            else if (o == "lipschitz") c.objective = Objective::Lipschitz;
            else fail(ErrorKind::Config, "objective must be indicator, lp or lipschitz");
        }
        // κ: explicit values or the order-only default c T / √n.
        const Json kappa = j.contains("kappa") ? j.at("kappa") : Json{{"order_only_c", 1.0}};
        if (!j.contains("kappa") && !c.model) {
            c.kappa_missing = true;
        } else if (kappa.contains("kappa1") || kappa.contains("kappa2")) {
            c.kappa1 = get_number(kappa, "kappa1");
            c.kappa2 = get_number(kappa, "kappa2");
        } else {
            const double cc = get_number(kappa, "order_only_c", 1.0);
            const double n = kappa.contains("n") ? get_number(kappa, "n")
                                                 : (c.model ? static_cast<double>(c.model->n()) : 0.0);
            require(n >= 1.0, ErrorKind::Config, "order-only kappa needs a model or an explicit n");
            c.kappa1 = c.kappa2 = order_only_kappa(cc, c.horizon, n);
            c.kappa_order_only = true;
        }
        const Json env = j.contains("envelopes") ? j.at("envelopes") : Json::object();
        c.x_tail = env.contains("x") ? envelope_from_json(env.at("x"), c)
                                     : (c.model ? c.model->envelope() : TailEnvelope::zero());
        c.z_tail = env.contains("z") ? envelope_from_json(env.at("z"), c)
                                     : TailEnvelope::gaussian({1.0, 1.0}, 4.0, c.horizon);
        if (j.contains("params") && !(j.at("params").is_string() && j.at("params").get<std::string>() == "optimize")) {
            const Json& p = j.at("params");
            c.params = std::array<double, 4>{get_number(p, "epsilon"), get_number(p, "delta"),
                                             get_number(p, "theta", 0.0), get_number(p, "gamma", 0.0)};
        }
        if (j.contains("search")) {
            const Json& s = j.at("search");
            auto range = [&](const char* key, double& lo, double& hi) {
                if (!s.contains(key)) return;
                const auto v = get_vector(s.at(key), key);
                require(v.size() == 2, ErrorKind::Config, std::string(key) + " range needs [lo, hi]");
                lo = v[0];
                hi = v[1];
            };
            range("epsilon", c.box.eps_lo, c.box.eps_hi);
            range("delta", c.box.delta_lo, c.box.delta_hi);
            range("theta", c.box.theta_lo, c.box.theta_hi);
            range("gamma", c.box.gamma_lo, c.box.gamma_hi);
        }
        if (j.contains("optimizer")) {
            const Json& o = j.at("optimizer");
            c.optimizer.budget = static_cast<int>(get_count(o, "budget", 4));
            c.optimizer.rounds = static_cast<int>(get_count(o, "rounds", 3));
        }
        if (j.contains("monte_carlo")) {
            c.samples = get_count(j.at("monte_carlo"), "samples", c.samples);
            c.paths = get_count(j.at("monte_carlo"), "paths", c.paths);
        }
        require(c.samples >= 100 && c.paths >= 100, ErrorKind::Config, "Monte Carlo budgets must be >= 100");
        if (j.contains("smoothing")) {
            const Json& s = j.at("smoothing");
            SmoothingParams sp;
            sp.epsilon = get_number(s, "epsilon");
            sp.delta = get_number(s, "delta");
            sp.horizon = c.horizon;
            sp.dim = c.dim;
            c.smoothing = sp;
            if (s.contains("directions")) {
                for (const auto& d : s.at("directions")) c.directions.push_back(path_from_json(d, c.horizon, c.dim, base_dir));
            }
            c.finite_difference = get_bool(s, "finite_difference", false);
            c.fd_relative_step = get_number(s, "relative_step", 1e-3);
        }
        if (j.contains("path")) c.path = path_from_json(j.at("path"), c.horizon, c.dim, base_dir);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        fail(ErrorKind::Config, e.what());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, e.what());
    }
    return c;
}

TheoremInputs theorem_inputs(const ExperimentConfig& c) {
    require(!c.kappa_missing, ErrorKind::Config, "the bound needs a model or an explicit kappa block");
    TheoremInputs in;
    in.kappa1 = c.kappa1;
    in.kappa2 = c.kappa2;
    in.kappa_order_only = c.kappa_order_only;
    in.horizon = c.horizon;
    in.dim = c.dim;
    in.x_tail = c.x_tail;
    in.z_tail = c.z_tail;
    in.set = c.set;
    if (c.objective == Objective::Lipschitz) {
        in.x_mean = mean_envelope_from_tail(c.x_tail);
        in.z_mean = mean_envelope_from_tail(c.z_tail);
        MonteCarlo mc;
        mc.samples = c.paths;
        mc.seed = derive_seed(c.seed, "bm_sup_mean");
        in.bm_sup_mean = expected_bm_supnorm(c.dim, mc).value;
    }
    return in;
}

} // namespace gsmooth
