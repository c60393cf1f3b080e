#include "cli.hpp"

#include "carousel/simulator.hpp"
#include "carousel/solver.hpp"
#include "carousel/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace carousel::cli {

using nlohmann::json;

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ValidationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string strategy = "bi-shortest";
    std::string strategy_b;
    std::string n = "2";
    std::string n_b;
    std::string pmf;
    std::string pmf_b;
    std::string init = "zero";
    std::size_t grid = kDefaultGridPoints;
    double tol = 1e-8;
    int max_iter = 200;
    std::size_t stride = 1;

    std::uint64_t seed = 42;
    double orders = 1e5;
    double warmup = 1000;
    int reps = 10;
    unsigned threads = 0;

    std::string scenario = "balanced";
    std::string strategies = "all";
    double p = 0.5;

    std::string out;
    std::string summary;
    std::string format = "csv";
};

// JSON numbers carry the same 12 significant digits as the CSV output.
json number(double x)
{
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return std::strtod(format_number(x).c_str(), nullptr);
}

json estimate_json(const Estimate& e)
{
    json j{{"value", number(e.value)}, {"half_width", nullptr}};
    if (e.half_width) {
        j["half_width"] = number(*e.half_width);
    }
    return j;
}

StrategyId strategy_from(const std::string& name)
{
    if (auto s = parse_strategy(name)) {
        return *s;
    }
    throw UsageError("unknown strategy '" + name + "'");
}

std::int64_t count_from(double v, const char* flag)
{
    if (!(v >= 0.0) || v != std::floor(v) || v > 9e15) {
        throw UsageError(std::string(flag) + " must be a nonnegative integer");
    }
    return static_cast<std::int64_t>(v);
}

int single_size(const std::string& text)
{
    const auto sizes = parse_size_list(text);
    if (sizes.size() != 1) {
        throw UsageError("--n must be a single size here");
    }
    return sizes.front();
}

OrderSizeModel size_model(const std::string& n, const std::string& pmf)
{
    if (!pmf.empty()) {
        try {
            return OrderSizeModel::parse_pmf(pmf);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    return OrderSizeModel::fixed(single_size(n));
}

SolverConfig solver_config(const Options& o)
{
    SolverConfig cfg;
    cfg.grid_points = o.grid;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    if (o.init == "zero") {
        cfg.initial = InitialGuess::Zero;
    } else if (o.init == "envelope") {
        cfg.initial = InitialGuess::UpperEnvelope;
    } else {
        throw UsageError("--init must be zero or envelope");
    }
    try {
        cfg.validate();
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

SimConfig sim_config(const Options& o)
{
    SimConfig cfg;
    cfg.total_orders = count_from(o.orders, "--orders");
    cfg.warmup_orders = count_from(o.warmup, "--warmup");
    cfg.replications = o.reps;
    cfg.base_seed = o.seed;
    cfg.threads = o.threads;
    cfg.cdf_grid_points = o.grid;
    try {
        cfg.validate();
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

// Primary output: the --out file if given, otherwise the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw UsageError("cannot open '" + path + "' for writing");
            }
            stream_ = &file_;
        }
    }

    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

// CSV mode leaves the JSON summary to --summary, or to stdout when the CSV
// itself went to a file.
void emit_summary(const Options& o, const json& summary, std::ostream& out)
{
    if (!o.summary.empty()) {
        Sink sink(o.summary, out);
        *sink << summary.dump(2) << '\n';
    } else if (!o.out.empty()) {
        out << summary.dump(2) << '\n';
    }
}

void write_cdf_csv(std::ostream& os, const GridFunction& f, std::size_t stride)
{
    os << "x,F\n";
    for (std::size_t i = 0; i < f.size(); i += stride) {
        os << format_number(f.node(i)) << ',' << format_number(f[i]) << '\n';
    }
    if ((f.size() - 1) % stride != 0) {
        os << format_number(f.x_max()) << ',' << format_number(f[f.size() - 1]) << '\n';
    }
}

json cdf_json(const GridFunction& f)
{
    json xs = json::array();
    json fs = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        xs.push_back(number(f.node(i)));
        fs.push_back(number(f[i]));
    }
    return {{"x", xs}, {"F", fs}};
}

json solve_summary(const SolveResult& r)
{
    return {{"iterations", r.iterations},
            {"residual", number(r.residual)},
            {"contraction_bound", number(r.contraction_bound)},
            {"aposteriori_error", number(r.aposteriori_error)},
            {"mean_sojourn", number(r.mean_sojourn)},
            {"throughput", number(r.throughput)}};
}

SolveResult checked_solve(StrategyId s, int n, const SolverConfig& cfg)
{
    if (!solver_supported(s)) {
        throw UsageError("strategy '" + std::string(strategy_name(s)) +
                         "' has no solver; use uni-nearest, bi-nearest or bi-shortest");
    }
    if (n == 1 && s == StrategyId::UniNearest) {
        throw UsageError("uni-nearest needs n >= 2 (use solve-variable for size-one orders)");
    }
    return solve_sojourn(s, n, cfg);
}

void cmd_solve(const Options& o, std::ostream& out)
{
    const StrategyId s = strategy_from(o.strategy);
    const int n = single_size(o.n);
    const SolveResult r = checked_solve(s, n, solver_config(o));
    json summary = solve_summary(r);
    summary["n"] = n;
    summary["strategy"] = strategy_name(s);

    Sink sink(o.out, out);
    if (o.format == "json") {
        summary["cdf"] = cdf_json(r.cdf);
        *sink << summary.dump(2) << '\n';
        return;
    }
    write_cdf_csv(*sink, r.cdf, o.stride);
    emit_summary(o, summary, out);
}

void cmd_solve_variable(const Options& o, std::ostream& out)
{
    if (o.pmf.empty()) {
        throw UsageError("solve-variable needs --pmf");
    }
    const OrderSizeModel sizes = size_model(o.n, o.pmf);
    const VariableSolveResult r = solve_variable_uni(sizes, solver_config(o));
    json summary = solve_summary(r.summary);
    summary["pmf"] = sizes.describe();
    summary["strategy"] = strategy_name(StrategyId::UniNearest);

    Sink sink(o.out, out);
    if (o.format == "json") {
        summary["cdf"] = cdf_json(r.mixture);
        json comps = json::object();
        for (std::size_t k = 0; k < r.sizes.size(); ++k) {
            comps[std::to_string(r.sizes[k])] = cdf_json(r.per_size[k])["F"];
        }
        summary["per_size"] = comps;
        *sink << summary.dump(2) << '\n';
        return;
    }
    auto& os = *sink;
    os << "x,F";
    for (int m : r.sizes) {
        os << ",F" << m;
    }
    os << '\n';
    const GridFunction& f = r.mixture;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i % o.stride != 0 && i + 1 != f.size()) {
            continue;
        }
        os << format_number(f.node(i)) << ',' << format_number(f[i]);
        for (const auto& g : r.per_size) {
            os << ',' << format_number(g[i]);
        }
        os << '\n';
    }
    emit_summary(o, summary, out);
}

void cmd_convergence(const Options& o, std::ostream& out)
{
    const StrategyId s = strategy_from(o.strategy);
    const int n = single_size(o.n);
    SolverConfig cfg = solver_config(o);
    cfg.history_cap = static_cast<std::size_t>(o.max_iter) + 1;
    const SolveResult r = checked_solve(s, n, cfg);

    Sink sink(o.out, out);
    if (o.format == "json") {
        json iters = json::array();
        for (std::size_t k = 0; k < r.iterates.size(); ++k) {
            json it = cdf_json(r.iterates[k]);
            it["iteration"] = k;
            it["sup_step"] = k == 0 ? json(nullptr) : number(r.steps[k - 1]);
            iters.push_back(it);
        }
        json doc = solve_summary(r);
        doc["n"] = n;
        doc["strategy"] = strategy_name(s);
        doc["iterates"] = iters;
        *sink << doc.dump(2) << '\n';
        return;
    }
    auto& os = *sink;
    os << "iteration,sup_step,x,F\n";
    for (std::size_t k = 0; k < r.iterates.size(); ++k) {
        const GridFunction& f = r.iterates[k];
        const std::string step = k == 0 ? "" : format_number(r.steps[k - 1]);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i % o.stride != 0 && i + 1 != f.size()) {
                continue;
            }
            os << k << ',' << step << ',' << format_number(f.node(i)) << ',' << format_number(f[i]) << '\n';
        }
    }
}

void cmd_simulate(const Options& o, std::ostream& out)
{
    SimConfig cfg = sim_config(o);
    cfg.strategy_a = strategy_from(o.strategy);
    cfg.strategy_b = o.strategy_b.empty() ? cfg.strategy_a : strategy_from(o.strategy_b);
    cfg.orders_a = size_model(o.n, o.pmf);
    const bool b_given = !o.n_b.empty() || !o.pmf_b.empty();
    cfg.orders_b = b_given ? size_model(o.n_b.empty() ? o.n : o.n_b, o.pmf_b) : cfg.orders_a;
    const SimulationSummary s = run_simulation(cfg);

    json reps = json::array();
    for (const auto& r : s.replications) {
        reps.push_back({{"orders", r.orders},
                        {"mean_sojourn", number(r.mean_sojourn)},
                        {"throughput", number(r.throughput)},
                        {"max_sojourn", number(r.max_sojourn)}});
    }
    json summary{{"strategy_a", strategy_name(cfg.strategy_a)},
                 {"strategy_b", strategy_name(cfg.strategy_b)},
                 {"orders_a", cfg.orders_a.describe()},
                 {"orders_b", cfg.orders_b.describe()},
                 {"seed", cfg.base_seed},
                 {"mean_sojourn", estimate_json(s.mean_sojourn)},
                 {"throughput", estimate_json(s.throughput)},
                 {"max_sojourn", number(s.max_sojourn)},
                 {"replications", reps}};

    Sink sink(o.out, out);
    if (o.format == "json") {
        summary["empirical_cdf"] = cdf_json(s.empirical_cdf);
        *sink << summary.dump(2) << '\n';
        return;
    }
    write_cdf_csv(*sink, s.empirical_cdf, o.stride);
    emit_summary(o, summary, out);
}

Scenario scenario_from(const Options& o)
{
    Scenario sc;
    sc.p = o.p;
    if (o.scenario == "balanced") {
        sc.kind = ScenarioKind::BalancedFixed;
    } else if (o.scenario == "unbalanced") {
        sc.kind = ScenarioKind::UnbalancedFixed;
    } else if (o.scenario == "two-point") {
        sc.kind = ScenarioKind::TwoPointMixture;
        if (!(o.p > 0.0 && o.p < 1.0)) {
            throw UsageError("--p must be in (0, 1)");
        }
    } else if (o.scenario == "uniform") {
        sc.kind = ScenarioKind::UniformRange;
    } else {
        throw UsageError("--scenario must be balanced, unbalanced, two-point or uniform");
    }
    return sc;
}

std::vector<StrategyId> strategy_list(const std::string& text)
{
    if (text == "all") {
        return {kAllStrategies.begin(), kAllStrategies.end()};
    }
    std::vector<StrategyId> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        out.push_back(strategy_from(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

void cmd_compare(const Options& o, std::ostream& out)
{
    const Scenario sc = scenario_from(o);
    const auto strategies = strategy_list(o.strategies);
    const auto sizes = parse_size_list(o.n);
    const auto rows = compare_strategies(strategies, sizes, sc, sim_config(o));

    Sink sink(o.out, out);
    if (o.format == "json") {
        json doc = json::array();
        for (const auto& r : rows) {
            doc.push_back({{"strategy", strategy_name(r.strategy)},
                           {"n", r.n},
                           {"average_size", number(r.average_size)},
                           {"throughput", number(r.throughput.value)},
                           {"ci_low", number(r.throughput.low())},
                           {"ci_high", number(r.throughput.high())}});
        }
        *sink << doc.dump(2) << '\n';
        return;
    }
    auto& os = *sink;
    os << "strategy,n,throughput,ci_low,ci_high\n";
    for (const auto& r : rows) {
        os << strategy_name(r.strategy) << ',' << r.n << ',' << format_number(r.throughput.value) << ','
           << format_number(r.throughput.low()) << ',' << format_number(r.throughput.high()) << '\n';
    }
}

void cmd_validate(const Options& o, std::ostream& out)
{
    ValidationOptions vo;
    vo.seed = o.seed;
    vo.orders = count_from(o.orders, "--orders");
    vo.replications = o.reps;
    vo.grid_points = o.grid;
    std::vector<CheckResult> checks;
    try {
        checks = run_validation(vo);
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }

    std::size_t failed = 0;
    Sink sink(o.out, out);
    if (o.format == "json") {
        json doc = json::array();
        for (const auto& c : checks) {
            failed += c.passed ? 0 : 1;
            doc.push_back({{"check", c.name},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"limit", number(c.limit)},
                           {"detail", c.detail}});
        }
        *sink << doc.dump(2) << '\n';
    } else {
        *sink << "check,passed,value,limit,detail\n";
        for (const auto& c : checks) {
            failed += c.passed ? 0 : 1;
            *sink << c.name << ',' << (c.passed ? "PASS" : "FAIL") << ',' << format_number(c.value) << ','
                  << format_number(c.limit) << ',' << c.detail << '\n';
        }
    }
    if (failed > 0) {
        throw ValidationFailed(std::to_string(failed) + " of " + std::to_string(checks.size()) +
                               " checks failed");
    }
}

void add_solver_flags(CLI::App* app, Options& o)
{
    app->add_option("--grid", o.grid, "grid points on [0, 1]")->capture_default_str();
    app->add_option("--tol", o.tol, "stop when successive sup-distance < tol")->capture_default_str();
    app->add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
    app->add_option("--init", o.init, "initial guess: zero or envelope")->capture_default_str();
    app->add_option("--stride", o.stride, "write every k-th grid node")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_sim_flags(CLI::App* app, Options& o)
{
    app->add_option("--seed", o.seed, "base seed")->capture_default_str();
    app->add_option("--orders", o.orders, "orders per replication (1e6 accepted)")->capture_default_str();
    app->add_option("--warmup", o.warmup, "discarded orders per replication")->capture_default_str();
    app->add_option("--reps", o.reps, "replications")->capture_default_str();
    app->add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();
    app->add_option("--grid", o.grid, "empirical CDF grid points on [0, 1]")->capture_default_str();
}

void add_output_flags(CLI::App* app, Options& o, bool with_summary)
{
    app->add_option("--out", o.out, "output file (default: standard output)");
    app->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    if (with_summary) {
        app->add_option("--summary", o.summary, "file for the JSON summary in csv mode");
    }
}

void print_error(std::ostream& err, const char* kind, const std::string& message, json extra = json::object())
{
    extra["error"] = kind;
    extra["message"] = message;
    err << extra.dump() << '\n';
}

}  // namespace

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<int> parse_size_list(const std::string& text)
{
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw UsageError("bad size '" + s + "' in '" + text + "'");
        }
        if (used != s.size() || v < 1) {
            throw UsageError("bad size '" + s + "' in '" + text + "'");
        }
        return v;
    };
    std::vector<int> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const int lo = to_int(text.substr(0, dots));
        const int hi = to_int(text.substr(dots + 2));
        if (hi < lo) {
            throw UsageError("empty size range '" + text + "'");
        }
        for (int v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        out.push_back(to_int(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Sojourn-time distributions and throughput for a picker serving two carousels"};
    app.set_config("--config", "", "key=value file with option defaults");
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "fixed-point solution of the sojourn-time CDF");
    solve->add_option("--strategy", o.strategy, "uni-nearest, bi-nearest or bi-shortest")->capture_default_str();
    solve->add_option("--n", o.n, "order size")->capture_default_str();
    add_solver_flags(solve, o);
    add_output_flags(solve, o, true);

    auto* variable = app.add_subcommand("solve-variable", "unidirectional carousel with random order sizes");
    variable->add_option("--pmf", o.pmf, "order-size pmf, e.g. 1:0.5,9:0.5")->required();
    add_solver_flags(variable, o);
    add_output_flags(variable, o, true);

    auto* conv = app.add_subcommand("convergence", "every iterate of the fixed-point iteration");
    conv->add_option("--strategy", o.strategy, "uni-nearest, bi-nearest or bi-shortest")->capture_default_str();
    conv->add_option("--n", o.n, "order size")->capture_default_str();
    add_solver_flags(conv, o);
    add_output_flags(conv, o, false);

    auto* sim = app.add_subcommand("simulate", "discrete-event simulation of the two carousels");
    sim->add_option("--strategy", o.strategy, "strategy on both carousels (or carousel A)")->capture_default_str();
    sim->add_option("--strategy-b", o.strategy_b, "strategy on carousel B");
    sim->add_option("--n", o.n, "fixed order size")->capture_default_str();
    sim->add_option("--pmf", o.pmf, "order-size pmf instead of --n");
    sim->add_option("--n-b", o.n_b, "fixed order size on carousel B");
    sim->add_option("--pmf-b", o.pmf_b, "order-size pmf on carousel B");
    sim->add_option("--stride", o.stride, "write every k-th grid node")->check(CLI::PositiveNumber);
    add_sim_flags(sim, o);
    add_output_flags(sim, o, true);

    auto* cmp = app.add_subcommand("compare", "throughput table over strategies and order sizes");
    cmp->add_option("--scenario", o.scenario, "balanced, unbalanced, two-point or uniform")->capture_default_str();
    cmp->add_option("--strategies", o.strategies, "all or a comma list")->capture_default_str();
    cmp->add_option("--n", o.n, "sizes: 5, 1..10 or 2,3,5")->capture_default_str();
    cmp->add_option("--p", o.p, "two-point probability of a one-item order")->capture_default_str();
    add_sim_flags(cmp, o);
    add_output_flags(cmp, o, false);

    auto* val = app.add_subcommand("validate", "cross-check solver, simulator and closed forms");
    val->add_option("--seed", o.seed, "base seed")->capture_default_str();
    val->add_option("--orders", o.orders, "orders per replication")->capture_default_str();
    val->add_option("--reps", o.reps, "replications")->capture_default_str();
    val->add_option("--grid", o.grid, "grid points")->capture_default_str();
    add_output_flags(val, o, false);

    std::vector<const char*> argv{"carousel"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        print_error(err, "usage", e.what());
        return kUsage;
    }

    try {
        if (solve->parsed()) {
            cmd_solve(o, out);
        } else if (variable->parsed()) {
            cmd_solve_variable(o, out);
        } else if (conv->parsed()) {
            cmd_convergence(o, out);
        } else if (sim->parsed()) {
            cmd_simulate(o, out);
        } else if (cmp->parsed()) {
            cmd_compare(o, out);
        } else {
            cmd_validate(o, out);
        }
    } catch (const UsageError& e) {
        print_error(err, "usage", e.what());
        return kUsage;
    } catch (const ConvergenceError& e) {
        print_error(err, "numerical", e.what(),
                    {{"iterations", e.iterations()}, {"residual", number(e.residual())}});
        return kNumerical;
    } catch (const ValidationFailed& e) {
        print_error(err, "validation", e.what());
        return kValidation;
    } catch (const std::domain_error& e) {
        print_error(err, "usage", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        print_error(err, "numerical", e.what());
        return kNumerical;
    }
    return kOk;
}

}  // namespace carousel::cli
