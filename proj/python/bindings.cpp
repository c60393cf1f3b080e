#include "carousel/simulator.hpp"
#include "carousel/solver.hpp"
#include "carousel/validation.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace carousel;

namespace {

py::array_t<double> to_array(std::span<const double> v)
{
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::array_t<double> nodes(const GridFunction& f)
{
    std::vector<double> x(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        x[i] = f.node(i);
    }
    return to_array(x);
}

GridFunction from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double x_max)
{
    if (a.ndim() != 1) {
        throw std::domain_error("expected a one-dimensional array");
    }
    return GridFunction(x_max, std::vector<double>(a.data(), a.data() + a.size()));
}

StrategyId strategy(const std::string& name)
{
    if (auto s = parse_strategy(name)) {
        return *s;
    }
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

py::dict estimate(const Estimate& e)
{
    py::dict d;
    d["value"] = e.value;
    d["half_width"] = e.half_width ? py::cast(*e.half_width) : py::none();
    return d;
}

py::dict solve_dict(const SolveResult& r)
{
    py::dict d;
    d["x"] = nodes(r.cdf);
    d["F"] = to_array(r.cdf.values());
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["contraction_bound"] = r.contraction_bound;
    d["aposteriori_error"] = r.aposteriori_error;
    d["mean_sojourn"] = r.mean_sojourn;
    d["throughput"] = r.throughput;
    d["steps"] = r.steps;
    return d;
}

SolverConfig solver_config(std::size_t grid, double tol, int max_iter)
{
    SolverConfig cfg;
    cfg.grid_points = grid;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_carousel, m)
{
    m.doc() = "Sojourn-time distributions and throughput for a picker serving two carousels";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    m.def("strategies", [] {
        std::vector<std::string> names;
        for (StrategyId s : kAllStrategies) {
            names.emplace_back(strategy_name(s));
        }
        return names;
    });

    m.def(
        "solve",
        [](const std::string& name, int n, std::size_t grid, double tol, int max_iter) {
            return solve_dict(solve_sojourn(strategy(name), n, solver_config(grid, tol, max_iter)));
        },
        py::arg("strategy"), py::arg("n"), py::arg("grid") = kDefaultGridPoints, py::arg("tol") = 1e-8,
        py::arg("max_iter") = 200, "Fixed-point sojourn CDF for a fixed order size.");

    m.def(
        "solve_variable",
        [](const std::string& pmf, std::size_t grid, double tol, int max_iter) {
            const auto r = solve_variable_uni(OrderSizeModel::parse_pmf(pmf), solver_config(grid, tol, max_iter));
            py::dict d = solve_dict(r.summary);
            py::dict comps;
            for (std::size_t k = 0; k < r.sizes.size(); ++k) {
                comps[py::int_(r.sizes[k])] = to_array(r.per_size[k].values());
            }
            d["per_size"] = comps;
            return d;
        },
        py::arg("pmf"), py::arg("grid") = kDefaultGridPoints, py::arg("tol") = 1e-8, py::arg("max_iter") = 200,
        "Unidirectional carousel with an order-size pmf such as '1:0.5,3:0.5'.");

    m.def(
        "apply_operator",
        [](const std::string& name, const py::array_t<double, py::array::c_style | py::array::forcecast>& f, int n) {
            return to_array(apply_operator(strategy(name), from_array(f, 1.0), n).values());
        },
        py::arg("strategy"), py::arg("F"), py::arg("n"), "One application of the integral operator on [0, 1].");

    m.def(
        "contraction_bound", [](const std::string& name, int n) { return contraction_bound(strategy(name), n); },
        py::arg("strategy"), py::arg("n"));

    m.def("closed_form_single_item_bi", &closed_form_single_item_bi, py::arg("x"));

    m.def(
        "prep_and_travel",
        [](const std::string& name, std::vector<double> positions, double budget) {
            std::sort(positions.begin(), positions.end());
            const auto pt = prep_and_travel(strategy(name), OrderRealization{std::move(positions)}, budget);
            return py::make_tuple(pt.prep, pt.travel);
        },
        py::arg("strategy"), py::arg("positions"), py::arg("budget") = 0.0,
        "Preparation and travel time of one order; returns (prep, travel).");

    m.def(
        "simulate",
        [](const std::string& name, const std::string& sizes, std::int64_t orders, std::int64_t warmup, int reps,
           std::uint64_t seed, std::optional<std::string> strategy_b, std::optional<std::string> sizes_b,
           unsigned threads) {
            SimConfig cfg;
            cfg.strategy_a = strategy(name);
            cfg.strategy_b = strategy_b ? strategy(*strategy_b) : cfg.strategy_a;
            auto model = [](const std::string& s) {
                return s.find(':') != std::string::npos ? OrderSizeModel::parse_pmf(s)
                                                        : OrderSizeModel::fixed(std::stoi(s));
            };
            cfg.orders_a = model(sizes);
            cfg.orders_b = sizes_b ? model(*sizes_b) : cfg.orders_a;
            cfg.total_orders = orders;
            cfg.warmup_orders = warmup;
            cfg.replications = reps;
            cfg.base_seed = seed;
            cfg.threads = threads;
            std::optional<SimulationSummary> result;
            {
                py::gil_scoped_release release;
                result = run_simulation(cfg);
            }
            const SimulationSummary& s = *result;
            py::dict d;
            d["mean_sojourn"] = estimate(s.mean_sojourn);
            d["throughput"] = estimate(s.throughput);
            d["max_sojourn"] = s.max_sojourn;
            d["x"] = nodes(s.empirical_cdf);
            d["F"] = to_array(s.empirical_cdf.values());
            std::vector<double> per_rep;
            for (const auto& r : s.replications) {
                per_rep.push_back(r.throughput);
            }
            d["replication_throughput"] = per_rep;
            return d;
        },
        py::arg("strategy"), py::arg("sizes"), py::arg("orders") = 100000, py::arg("warmup") = 1000,
        py::arg("reps") = 10, py::arg("seed") = 42, py::arg("strategy_b") = py::none(),
        py::arg("sizes_b") = py::none(), py::arg("threads") = 0,
        "Simulate both carousels. sizes is a fixed size ('5') or a pmf ('1:0.5,9:0.5').");

    m.def(
        "validate",
        [](std::uint64_t seed, std::int64_t orders, int reps, std::size_t grid) {
            ValidationOptions o;
            o.seed = seed;
            o.orders = orders;
            o.replications = reps;
            o.grid_points = grid;
            std::vector<CheckResult> checks;
            {
                py::gil_scoped_release release;
                checks = run_validation(o);
            }
            py::list out;
            for (const auto& c : checks) {
                out.append(py::dict(py::arg("check") = c.name, py::arg("passed") = c.passed,
                                    py::arg("value") = c.value, py::arg("limit") = c.limit,
                                    py::arg("detail") = c.detail));
            }
            return out;
        },
        py::arg("seed") = 7, py::arg("orders") = 100000, py::arg("reps") = 10, py::arg("grid") = 1025);
}
