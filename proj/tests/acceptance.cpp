// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "carousel/densities.hpp"
#include "carousel/simulator.hpp"
#include "carousel/solver.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace carousel;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::array<StrategyId, 3> kSolvable{StrategyId::UniNearest, StrategyId::BiNearestSameDir,
                                              StrategyId::BiNearestShortest};

std::string label(StrategyId s, int n)
{
    return std::string(strategy_name(s)) + " n=" + std::to_string(n);
}

SolverConfig solver_grid(std::size_t points)
{
    SolverConfig cfg;
    cfg.grid_points = points;
    cfg.history_cap = 1000;
    return cfg;
}

SimConfig sim(StrategyId s, OrderSizeModel a, OrderSizeModel b, int reps, std::int64_t orders, std::uint64_t seed)
{
    SimConfig cfg;
    cfg.strategy_a = cfg.strategy_b = s;
    cfg.orders_a = std::move(a);
    cfg.orders_b = std::move(b);
    cfg.replications = reps;
    cfg.total_orders = orders;
    cfg.warmup_orders = 1000;
    cfg.base_seed = seed;
    return cfg;
}

bool disjoint(const Estimate& lo, const Estimate& hi)
{
    return lo.high() < hi.low();
}

// ---------------------------------------------------------------------------

Outcome residuals()
{
    double worst = 0.0;
    double slowest = 0.0;
    std::string where;
    for (StrategyId s : kSolvable) {
        for (int n : {2, 3, 5, 10}) {
            const auto t0 = Clock::now();
            const auto r = solve_sojourn(s, n, solver_grid(2049));
            const double dt = seconds_since(t0);
            slowest = std::max(slowest, dt);
            if (r.residual >= worst) {
                worst = r.residual;
                where = label(s, n);
            }
        }
    }
    std::ostringstream os;
    os << "max residual " << worst << " (" << where << "), slowest case " << slowest << " s";
    return {worst <= 1e-6 && slowest <= 10.0, os.str()};
}

// Two kinds of pairs: independent random node values, and a random smooth
// F with G = F + a + b x, which drives the ratio towards the bound.
std::pair<GridFunction, GridFunction> random_pair(Rng& rng, std::size_t points, bool smooth)
{
    std::vector<double> f(points);
    std::vector<double> g(points);
    if (!smooth) {
        for (std::size_t i = 0; i < points; ++i) {
            f[i] = rng.uniform();
            g[i] = rng.uniform();
        }
        return {GridFunction(1.0, f), GridFunction(1.0, g)};
    }
    std::array<double, 7> k{};
    for (double& v : k) {
        v = rng.uniform();
    }
    const double a = rng.uniform() - 0.5;
    const double b = rng.uniform() - 0.5;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(points - 1);
        const double t = x * 6;
        const auto j = std::min(static_cast<int>(t), 5);
        f[i] = k[j] + (t - j) * (k[j + 1] - k[j]);
        g[i] = std::clamp(f[i] + a + b * x, 0.0, 1.0);
    }
    return {GridFunction(1.0, f), GridFunction(1.0, g)};
}

Outcome lipschitz()
{
    Rng rng(2024, 0);
    bool ok = true;
    std::ostringstream os;
    for (StrategyId s : kSolvable) {
        for (int n : {2, 3, 5, 10}) {
            double worst = 0.0;
            for (int k = 0; k < 100; ++k) {
                const auto [f, g] = random_pair(rng, 513, k % 2 == 1);
                const double d = sup_distance(f, g);
                if (d == 0.0) {
                    continue;
                }
                worst = std::max(worst, sup_distance(apply_operator(s, f, n), apply_operator(s, g, n)) / d);
            }
            const double bound = contraction_bound(s, n);
            ok = ok && worst <= bound + 0.01;
            os << label(s, n) << ' ' << worst << "/" << bound << "; ";
        }
    }
    return {ok, os.str()};
}

Outcome five_iterations()
{
    double worst = 0.0;
    std::string where;
    for (StrategyId s : {StrategyId::UniNearest, StrategyId::BiNearestSameDir}) {
        for (int n = 2; n <= 10; ++n) {
            const auto r = solve_sojourn(s, n, solver_grid(2049));
            // fewer than five iterations means the iteration already stopped
            const auto& f5 = r.iterates.size() > 5 ? r.iterates[5] : r.cdf;
            const double d = sup_distance(f5, r.cdf);
            if (d >= worst) {
                worst = d;
                where = label(s, n);
            }
        }
    }
    return {worst <= 0.02, "max |F_5 - F*| = " + std::to_string(worst) + " (" + where + ")"};
}

Outcome alternation()
{
    double worst = 0.0;
    std::string where;
    for (StrategyId s : kSolvable) {
        for (int n : {2, 3, 5}) {
            const auto r = solve_sojourn(s, n, solver_grid(1025));
            const double h = r.cdf.step();
            for (std::size_t k = 0; k < r.iterates.size(); ++k) {
                for (std::size_t i = 0; i < r.cdf.size(); ++i) {
                    const double diff = r.iterates[k][i] - r.cdf[i];
                    const double violation = (k % 2 == 0 ? diff : -diff) / h;
                    if (violation > worst) {
                        worst = violation;
                        where = label(s, n) + " k=" + std::to_string(k);
                    }
                }
            }
        }
    }
    std::ostringstream os;
    os << "worst violation " << worst << " h" << (where.empty() ? "" : " (" + where + ")");
    return {worst <= 10.0, os.str()};
}

Outcome closed_form()
{
    SimConfig cfg = sim(StrategyId::BiNearestShortest, OrderSizeModel::fixed(1), OrderSizeModel::fixed(1), 10,
                        101000, 11);
    cfg.keep_samples = true;
    const auto s = run_simulation(cfg);
    const double ks = ks_distance(s.samples, closed_form_single_item_bi);
    return {ks <= 0.005, "KS " + std::to_string(ks) + " over " + std::to_string(s.samples.size()) + " orders"};
}

Outcome solver_vs_simulator()
{
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream os;
    for (StrategyId st : kSolvable) {
        for (int n : {2, 3, 5}) {
            const auto sol = solve_sojourn(st, n, solver_grid(2049));
            SimConfig cfg = sim(st, OrderSizeModel::fixed(n), OrderSizeModel::fixed(n), 20, 100000, 42);
            cfg.keep_samples = true;
            const auto s = run_simulation(cfg);
            const double ks = ks_distance(s.samples, [&](double x) { return x >= 1.0 ? 1.0 : eval(sol.cdf, x); });
            const double gap = std::abs(sol.throughput - s.throughput.value);
            const double hw = s.throughput.half_width.value_or(0.0);
            const bool pass = ks <= 0.01 && gap <= hw;
            ok = ok && pass;
            os << label(st, n) << (pass ? "" : " [x]") << " KS " << ks << " |dT| " << gap << "/" << hw << "; ";
        }
    }
    const double dt = seconds_since(t0);
    os << "total " << dt << " s";
    return {ok && dt <= 120.0, os.str()};
}

Outcome variable_identities()
{
    const double p1 = 0.5;
    const auto r = solve_variable_uni(OrderSizeModel::discrete({{1, p1}, {3, 1 - p1}}), solver_grid(2049));
    const auto& f1 = r.per_size.front();
    const double h = f1.step();
    const double es = r.summary.mean_sojourn;
    const std::size_t last = f1.size() - 1;
    const PrefixMoments mix(r.mixture, 0);
    auto f2 = [&](double x) { return 2 * x - x * x - 2 * x * mix(0, 1 - x); };

    const double e0 = std::abs(f1[0] - es);
    const double e1 = std::abs((f1[1] - f1[0]) / h - 1.0);
    const double e2 = std::abs((f2(h) - f2(0)) / h - 2 * es);
    const double e3 = std::abs((f1[last] - f1[last - 1]) / h - p1 * es);
    std::ostringstream os;
    os << "E[S]=" << es << " errors " << e0 << ", " << e1 << ", " << e2 << ", " << e3;
    return {e0 <= 1e-3 && e1 <= 5e-3 && e2 <= 5e-3 && e3 <= 5e-3, os.str()};
}

Outcome tight_bound()
{
    const auto s = run_simulation(
        sim(StrategyId::BiAvoidGap, OrderSizeModel::fixed(2), OrderSizeModel::fixed(2), 10, 101000, 3));
    return {s.max_sojourn <= 0.75 && s.max_sojourn >= 0.74, "max sojourn " + std::to_string(s.max_sojourn)};
}

Outcome crossover()
{
    const Scenario sc{ScenarioKind::UnbalancedFixed};
    int first = -1;
    Estimate at12_short;
    Estimate at12_avoid;
    for (int n = 1; n <= 12; ++n) {
        const auto a = run_simulation(sim(StrategyId::BiNearestShortest, sc.carousel_a(n), sc.carousel_b(n), 10,
                                          100000, 42)).throughput;
        const auto b = run_simulation(sim(StrategyId::BiAvoidGap, sc.carousel_a(n), sc.carousel_b(n), 10, 100000, 42))
                           .throughput;
        if (first < 0 && a.value > b.value) {
            first = n;
        }
        if (n == 12) {
            at12_short = a;
            at12_avoid = b;
        }
    }
    std::ostringstream os;
    os << "first n with shortest ahead: " << first << "; n=12 " << at12_short.value << " +- "
       << at12_short.half_width.value_or(0) << " vs " << at12_avoid.value << " +- "
       << at12_avoid.half_width.value_or(0);
    return {first >= 7 && first <= 11 && disjoint(at12_avoid, at12_short), os.str()};
}

Outcome balanced_dominance()
{
    bool ok = true;
    std::ostringstream os;
    for (int n = 3; n <= 10; ++n) {
        std::vector<std::pair<double, StrategyId>> ranking;
        for (StrategyId s : kAllStrategies) {
            const auto t = run_simulation(sim(s, OrderSizeModel::fixed(n), OrderSizeModel::fixed(n), 10, 100000, 42))
                               .throughput.value;
            ranking.emplace_back(t, s);
        }
        std::sort(ranking.rbegin(), ranking.rend());
        const bool top_two = (ranking[0].second == StrategyId::BiAvoidGap &&
                              ranking[1].second == StrategyId::BiGapFallback) ||
                             (ranking[0].second == StrategyId::BiGapFallback &&
                              ranking[1].second == StrategyId::BiAvoidGap);
        const double rel = std::abs(ranking[0].first - ranking[1].first) / ranking[0].first;
        ok = ok && top_two && rel <= 0.005;
        os << "n=" << n << ' ' << strategy_name(ranking[0].second) << '/' << strategy_name(ranking[1].second) << ' '
           << rel * 100 << "%; ";
    }
    return {ok, os.str()};
}

Outcome halving()
{
    auto mean_for = [](StrategyId s) {
        return run_simulation(sim(s, OrderSizeModel::fixed(1), OrderSizeModel::fixed(1), 10, 100000, 42))
            .mean_sojourn;
    };
    const Estimate uni = mean_for(StrategyId::UniNearest);
    const Estimate bi = mean_for(StrategyId::BiNearestSameDir);
    const double diff = bi.value - 0.5 * uni.value;
    const double hw = bi.half_width.value_or(0) + 0.5 * uni.half_width.value_or(0);
    std::ostringstream os;
    os.precision(12);
    os << "bi " << bi.value << " vs half of uni " << 0.5 * uni.value << ", difference " << diff
       << " (within statistical error " << hw << ": " << (std::abs(diff) <= hw ? "yes" : "no")
       << "); exact equality required";
    return {diff == 0.0, os.str()};
}

Outcome variability()
{
    const int n = 10;
    bool ok = true;
    std::ostringstream os;
    for (StrategyId s : {StrategyId::UniNearest, StrategyId::BiNearestSameDir}) {
        auto run = [&](ScenarioKind kind) {
            const Scenario sc{kind, 0.5};
            return run_simulation(sim(s, sc.carousel_a(n), sc.carousel_b(n), 10, 100000, 42)).throughput;
        };
        const auto two = run(ScenarioKind::TwoPointMixture);
        const auto uni = run(ScenarioKind::UniformRange);
        const auto fixed = run(ScenarioKind::BalancedFixed);
        const bool pass = disjoint(uni, two) && disjoint(fixed, uni);
        ok = ok && pass;
        os << strategy_name(s) << ' ' << two.value << " > " << uni.value << " > " << fixed.value << "; ";
    }
    return {ok, os.str()};
}

template <class Fn>
double quad(Fn fn, double a, double b, std::initializer_list<double> breaks)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::vector<double> pts{a, b};
    for (double p : breaks) {
        if (p > a && p < b) {
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        sum += GK::integrate(fn, pts[i], pts[i + 1], 12, 1e-13);
    }
    return sum;
}

Outcome density_suites()
{
    namespace d = densities;
    double worst = 0.0;
    Rng rng(13, 0);
    const double eps = 1e-6;
    for (int n : {3, 5}) {
        // normalization
        worst = std::max(worst, std::abs(quad([&](double y) { return d::travel_density_shortest(y, n); }, 0, 1,
                                              {0.5}) - 1.0));
        worst = std::max(worst, std::abs(quad([&](double x) { return d::prep_density_shortest(x, n); }, 0, 0.5,
                                              {}) - 1.0));
        worst = std::max(worst, std::abs(quad([&](double y) { return d::travel_density_single_dir(y, n); }, 0, 1,
                                              {}) - 1.0));
        for (double x : {0.05, 0.2, 0.3, 0.45}) {
            const double mass = quad([&](double y) { return d::travel_density_given_prep_shortest(y, x, n); }, 0,
                                     1 - 2 * x, {2 * x, 0.5});
            worst = std::max(worst, std::abs(mass - 1.0));
        }
        // Bayes: f_{B|A}(x|y) f_A(y) = f_{A|B}(y|x) f_B(x)
        int done = 0;
        while (done < 200) {
            const double y = 0.05 + 0.9 * rng.uniform();
            const double x = 0.5 * (1 - y) * rng.uniform();
            auto near = [&](double a, double b) { return std::abs(a - b) < 10 * eps; };
            if (near(x, 0.25) || near(y, 2 * x) || near(y, 0.5) || x < 10 * eps || y > 1 - 2 * x - 10 * eps) {
                continue;
            }
            const double lhs = (d::prep_cdf_given_travel_shortest(x + eps, y, n) -
                                d::prep_cdf_given_travel_shortest(x - eps, y, n)) /
                               (2 * eps) * d::travel_density_shortest(y, n);
            const double rhs = (d::travel_cdf_given_prep_shortest(y + eps, x, n) -
                                d::travel_cdf_given_prep_shortest(y - eps, x, n)) /
                               (2 * eps) * d::prep_density_shortest(x, n);
            worst = std::max(worst, std::abs(lhs - rhs));
            ++done;
        }
    }
    std::ostringstream os;
    os << "worst deviation " << worst;
    return {worst <= 1e-4, os.str()};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"fixed-point residual <= 1e-6, <= 10 s per case", residuals},
        {"empirical Lipschitz ratio <= contraction bound + 0.01", lipschitz},
        {"iterate 5 within 0.02 of the fixed point", five_iterations},
        {"iterates alternate around the fixed point", alternation},
        {"one-item closed form vs simulation, KS <= 0.005", closed_form},
        {"solver vs simulator: KS <= 0.01, throughput within 95% CI", solver_vs_simulator},
        {"variable-order boundary identities", variable_identities},
        {"n=2 gap strategy: max sojourn in [0.74, 0.75]", tight_bound},
        {"unbalanced crossover in [7, 11], disjoint CIs at n=12", crossover},
        {"balanced: gap strategies top two, within 0.5%", balanced_dominance},
        {"halving law, exact on identical seeds", halving},
        {"order-size variability raises throughput", variability},
        {"density normalization and Bayes consistency <= 1e-4", density_suites},
    };
    int failed = 0;
    int id = 1;
    for (const auto& [title, fn] : criteria) {
        const auto t0 = Clock::now();
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.passed ? 0 : 1;
        std::printf("%s  criterion %2d  %s  [%.1f s]\n      %s\n", o.passed ? "PASS" : "FAIL", id, title,
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
        ++id;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
