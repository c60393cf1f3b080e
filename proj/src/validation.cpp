#include "carousel/validation.hpp"

#include "carousel/simulator.hpp"
#include "carousel/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace carousel {

namespace {

// Statistical checks use a 99.9% interval so that a correct build passes for
// almost every seed; the acceptance tests use the plain 95% interval.
constexpr double kIntervalLevel = 0.9995;

std::string fmt(const char* pattern, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

CheckResult at_most(std::string name, double value, double limit, std::string detail = {})
{
    return {std::move(name), value <= limit, value, limit, std::move(detail)};
}

SimConfig base_sim(const ValidationOptions& opts)
{
    SimConfig cfg;
    cfg.total_orders = opts.orders;
    cfg.warmup_orders = std::min<std::int64_t>(1000, opts.orders / 10);
    cfg.replications = opts.replications;
    cfg.base_seed = opts.seed;
    cfg.cdf_grid_points = opts.grid_points;
    return cfg;
}

double wide_half_width(const Estimate& e, int replications)
{
    if (!e.half_width || replications < 2) {
        return 0.0;
    }
    return *e.half_width * t_quantile(kIntervalLevel, replications - 1) /
           t_quantile_975(replications - 1);
}

void solver_checks(const ValidationOptions& opts, std::vector<CheckResult>& out)
{
    SolverConfig scfg;
    scfg.grid_points = opts.grid_points;
    for (StrategyId s : kAllStrategies) {
        if (!solver_supported(s)) {
            continue;
        }
        for (int n : {2, 3, 5}) {
            const auto label = std::string(strategy_name(s)) + " n=" + std::to_string(n);
            const SolveResult sol = solve_sojourn(s, n, scfg);
            out.push_back(at_most("residual " + label, sol.residual, 1e-6,
                                  std::to_string(sol.iterations) + " iterations"));

            SimConfig cfg = base_sim(opts);
            cfg.strategy_a = cfg.strategy_b = s;
            cfg.orders_a = cfg.orders_b = OrderSizeModel::fixed(n);
            cfg.keep_samples = true;
            const SimulationSummary sim = run_simulation(cfg);
            const double ks = ks_distance(sim.samples, [&](double x) {
                return x >= 1.0 ? 1.0 : eval(sol.cdf, x);
            });
            out.push_back(at_most("ks solver-sim " + label, ks, 0.01));

            const double gap = std::abs(sol.throughput - sim.throughput.value);
            const double hw = wide_half_width(sim.throughput, cfg.replications);
            out.push_back(at_most("throughput solver-sim " + label, gap, hw,
                                  fmt("solver %.6f; simulated %.6f", sol.throughput,
                                      sim.throughput.value)));
        }
    }
}

void single_item_check(const ValidationOptions& opts, std::vector<CheckResult>& out)
{
    SimConfig cfg = base_sim(opts);
    cfg.strategy_a = cfg.strategy_b = StrategyId::BiNearestShortest;
    cfg.orders_a = cfg.orders_b = OrderSizeModel::fixed(1);
    cfg.keep_samples = true;
    const SimulationSummary sim = run_simulation(cfg);
    const double ks = ks_distance(sim.samples, [](double x) { return closed_form_single_item_bi(x); });
    out.push_back(at_most("ks closed form n=1", ks, 0.005));
}

// The two one-item strategies share their (zero) travel time, and the
// bidirectional preparation time is the unidirectional one folded in half.
void halving_check(const ValidationOptions& opts, std::vector<CheckResult>& out)
{
    auto mean_for = [&](StrategyId s) {
        SimConfig cfg = base_sim(opts);
        cfg.strategy_a = cfg.strategy_b = s;
        cfg.orders_a = cfg.orders_b = OrderSizeModel::fixed(1);
        return run_simulation(cfg).mean_sojourn;
    };
    const Estimate uni = mean_for(StrategyId::UniNearest);
    const Estimate bi = mean_for(StrategyId::BiNearestSameDir);
    const double limit = wide_half_width(bi, opts.replications) +
                         0.5 * wide_half_width(uni, opts.replications);
    out.push_back(at_most("halving law n=1", std::abs(bi.value - 0.5 * uni.value), limit,
                          fmt("means %.6f; %.6f", bi.value, uni.value)));
}

void variable_order_checks(const ValidationOptions& opts, std::vector<CheckResult>& out)
{
    SolverConfig scfg;
    scfg.grid_points = opts.grid_points;
    const double p1 = 0.5;
    const auto sizes = OrderSizeModel::discrete({{1, p1}, {3, 1.0 - p1}});
    const VariableSolveResult r = solve_variable_uni(sizes, scfg);
    const GridFunction& f1 = r.per_size.front();
    const double es = r.summary.mean_sojourn;
    const double h = f1.step();
    const std::size_t last = f1.size() - 1;

    // F^(2) from its defining formula; size 2 need not be in the support.
    const PrefixMoments mix(r.mixture, 0);
    auto f2 = [&](double x) { return 2.0 * x - x * x - 2.0 * x * mix(0, 1.0 - x); };

    out.push_back(at_most("F1(0) = E[S]", std::abs(f1[0] - es), 1e-3));
    out.push_back(at_most("F1'(0) = 1", std::abs((f1[1] - f1[0]) / h - 1.0), 5e-3));
    out.push_back(at_most("F1'(1) = p1 E[S]", std::abs((f1[last] - f1[last - 1]) / h - p1 * es), 5e-3));
    out.push_back(at_most("F2'(0) = 2 E[S]", std::abs((f2(h) - f2(0.0)) / h - 2.0 * es), 5e-3));
}

void tight_bound_check(const ValidationOptions& opts, std::vector<CheckResult>& out)
{
    SimConfig cfg = base_sim(opts);
    cfg.strategy_a = cfg.strategy_b = StrategyId::BiAvoidGap;
    cfg.orders_a = cfg.orders_b = OrderSizeModel::fixed(2);
    const SimulationSummary sim = run_simulation(cfg);
    out.push_back(at_most("max sojourn n=2 <= 3/4", sim.max_sojourn, 0.75));
}

// Smooth random pairs: a random piecewise-linear F and G = F + a + b x. Pure
// node-wise noise would average out inside the integrals and say little
// about the worst case.
std::pair<GridFunction, GridFunction> random_pair(Rng& rng, std::size_t points)
{
    constexpr int knots = 6;
    std::array<double, knots + 1> k{};
    for (double& v : k) {
        v = rng.uniform();
    }
    const double a = rng.uniform() - 0.5;
    const double b = rng.uniform() - 0.5;
    std::vector<double> f(points);
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(points - 1);
        const double t = x * knots;
        const auto j = std::min(static_cast<int>(t), knots - 1);
        f[i] = k[j] + (t - j) * (k[j + 1] - k[j]);
        g[i] = f[i] + a + b * x;
    }
    return {GridFunction(1.0, std::move(f)), GridFunction(1.0, std::move(g))};
}

void contraction_checks(const ValidationOptions& opts, std::vector<CheckResult>& out)
{
    Rng rng(opts.seed, 0xC0FFEE);
    for (StrategyId s : kAllStrategies) {
        if (!solver_supported(s)) {
            continue;
        }
        for (int n : {2, 5}) {
            double worst = 0.0;
            for (int k = 0; k < 10; ++k) {
                const auto [f, g] = random_pair(rng, opts.grid_points);
                const double d = sup_distance(f, g);
                worst = std::max(worst, sup_distance(apply_operator(s, f, n), apply_operator(s, g, n)) / d);
            }
            out.push_back(at_most("lipschitz " + std::string(strategy_name(s)) + " n=" + std::to_string(n),
                                  worst, contraction_bound(s, n) + 0.01));
        }
    }
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opts)
{
    if (opts.orders < 100 || opts.replications < 2 || opts.grid_points < 3) {
        throw std::domain_error("run_validation: need orders >= 100, replications >= 2, grid >= 3");
    }
    std::vector<CheckResult> out;
    solver_checks(opts, out);
    single_item_check(opts, out);
    halving_check(opts, out);
    variable_order_checks(opts, out);
    tight_bound_check(opts, out);
    contraction_checks(opts, out);
    return out;
}

}  // namespace carousel
