#include "carousel/solver.hpp"

#include "carousel/densities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace carousel {

namespace {

using densities::pos_pow;

double ipow(double base, int k) noexcept
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= base;
    }
    return r;
}

void require_operator_input(const GridFunction& f, int n, const char* who)
{
    if (n < 2) {
        throw std::domain_error(std::string(who) + ": n must be >= 2");
    }
    if (std::abs(f.x_max() - 1.0) > 1e-12) {
        throw std::domain_error(std::string(who) + ": F must live on [0, 1]");
    }
}

// Evaluates body(x) at every node, with the last node pinned to 1 exactly.
template <class Body>
GridFunction map_nodes(const GridFunction& f, Body&& body)
{
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = (i + 1 == f.size()) ? 1.0 : f.node(i);
        out[i] = body(x);
    }
    return clip_unit(GridFunction(f.x_max(), std::move(out)));
}

double single_dir_envelope(double x, int n)
{
    return n * ipow(x, n - 1) - (n - 1) * ipow(x, n);
}

}  // namespace

GridFunction apply_operator_uni_nearest(const GridFunction& f, int n)
{
    require_operator_input(f, n, "apply_operator_uni_nearest");
    const PrefixMoments prefix(f, 0);
    return map_nodes(f, [&](double x) {
        return single_dir_envelope(x, n) - n * ipow(x, n - 1) * prefix(0, 1.0 - x);
    });
}

GridFunction apply_operator_bi_nearest(const GridFunction& f, int n)
{
    require_operator_input(f, n, "apply_operator_bi_nearest");
    const PrefixMoments prefix(f, 0);
    const double h = f.step();
    const double coeff = 2.0 * n * (n - 1);
    return map_nodes(f, [&](double x) {
        const double lo = std::max(2.0 * x - 1.0, 0.0);
        const double inner = trapezoid_on_grid(
            [&](double y) { return ipow(y, n - 2) * prefix(0, 0.5 * (1.0 + y) - x); }, lo, x, h);
        return single_dir_envelope(x, n) - coeff * inner;
    });
}

GridFunction apply_operator_bi_shortest(const GridFunction& f, int n)
{
    require_operator_input(f, n, "apply_operator_bi_shortest");
    const int m = n - 2;
    const PrefixMoments prefix(f, m);
    const double h = f.step();
    const double nn1 = static_cast<double>(n) * (n - 1);

    // (c - 2z)^m = sum_k binom(m, k) c^(m-k) (-2)^k z^k
    std::vector<double> expand(static_cast<std::size_t>(m) + 1);
    {
        double binom = 1.0;
        for (int k = 0; k <= m; ++k) {
            expand[static_cast<std::size_t>(k)] = binom * ipow(-2.0, k);
            binom = binom * (m - k) / (k + 1);
        }
    }

    return map_nodes(f, [&](double x) {
        const double travel = densities::travel_cdf_shortest(x, n);

        const double lo1 = std::max(2.0 * x - 1.0, 0.0);
        const double t1 = trapezoid_on_grid(
            [&](double y) { return ipow(y, m) * prefix(0, 0.5 * (1.0 + y) - x); }, lo1, x, h);

        // int_0^U ((3y - 2x - 2z)^+)^m F(z) dz with U = min(1/4 + y - x, (1+y)/2 - x);
        // the kernel vanishes beyond z = (3y - 2x)/2, so integrate up to the
        // smaller of the two limits.
        std::vector<double> mom(static_cast<std::size_t>(m) + 1);
        const double lo2 = std::max(std::max(x - 0.25, 0.0), 2.0 * x - 1.0);
        const double t2 = trapezoid_on_grid(
            [&](double y) {
                const double c = 3.0 * y - 2.0 * x;
                const double upper = std::min({0.25 + y - x, 0.5 * (1.0 + y) - x, 0.5 * c});
                if (!(c > 0.0) || !(upper > 0.0)) {
                    return 0.0;
                }
                prefix.all(upper, mom);
                double s = 0.0;
                double cpow = 1.0;  // c^(m-k), accumulated from k = m downwards
                for (int k = m; k >= 0; --k) {
                    s += expand[static_cast<std::size_t>(k)] * cpow * mom[static_cast<std::size_t>(k)];
                    cpow *= c;
                }
                return s;
            },
            lo2, x, h);

        // 2y - 1 >= 0 on this range, so the kernel is (2y - 1)^m with 0^0 = 1
        // as the limit from inside the interval.
        const double lo3 = std::max(0.5, 2.0 * x - 1.0);
        const double hi3 = std::max(0.5, x);
        const double t3 = trapezoid_on_grid(
            [&](double y) {
                return ipow(std::max(2.0 * y - 1.0, 0.0), m) * prefix(0, 0.5 * (1.0 + y) - x);
            },
            lo3, hi3, h);

        return travel - 2.0 * nn1 * t1 - 2.0 * nn1 * t2 + 4.0 * nn1 * t3;
    });
}

GridFunction apply_operator(StrategyId strategy, const GridFunction& f, int n)
{
    switch (strategy) {
    case StrategyId::UniNearest:
        return apply_operator_uni_nearest(f, n);
    case StrategyId::BiNearestSameDir:
        return apply_operator_bi_nearest(f, n);
    case StrategyId::BiNearestShortest:
        return apply_operator_bi_shortest(f, n);
    default:
        throw std::domain_error("no integral operator for strategy " +
                                std::string(strategy_name(strategy)));
    }
}

double contraction_bound(StrategyId strategy, int n)
{
    if (!solver_supported(strategy)) {
        throw std::domain_error("no contraction bound for strategy " +
                                std::string(strategy_name(strategy)));
    }
    if (n < 2) {
        throw std::domain_error("contraction_bound: n must be >= 2");
    }
    if (strategy == StrategyId::BiNearestShortest) {
        return 11.0 / 12.0;
    }
    return std::pow(static_cast<double>(n - 1) / n, n - 1);
}

GridFunction upper_envelope(StrategyId strategy, int n, std::size_t grid_points)
{
    return apply_operator(strategy, GridFunction::constant(1.0, grid_points, 0.0), n);
}

double closed_form_single_item_bi(double x)
{
    if (!(x >= 0.0)) {
        throw std::domain_error("closed_form_single_item_bi: x must be >= 0");
    }
    if (x > 0.5) {
        return 1.0;
    }
    return std::sin(2.0 * x) + (1.0 - std::sin(1.0)) / std::cos(1.0) * std::cos(2.0 * x);
}

void SolverConfig::validate() const
{
    if (!(tol > 0.0)) {
        throw std::domain_error("SolverConfig: tol must be positive");
    }
    if (grid_points < 3) {
        throw std::domain_error("SolverConfig: grid_points must be >= 3");
    }
    if (max_iter < 1) {
        throw std::domain_error("SolverConfig: max_iter must be >= 1");
    }
    if (initial == InitialGuess::Custom) {
        if (!custom_initial) {
            throw std::domain_error("SolverConfig: custom initial guess missing");
        }
        if (custom_initial->size() != grid_points || custom_initial->x_max() != 1.0) {
            throw std::domain_error("SolverConfig: custom initial guess is on a different grid");
        }
    }
}

Moments moments(const GridFunction& cdf)
{
    const double last = cdf[cdf.size() - 1];
    if (std::abs(last - 1.0) > 1e-6) {
        throw std::domain_error("moments: F(x_max) = " + std::to_string(last) + " is not 1");
    }
    const double mean = cdf.x_max() - integral(cdf);
    if (!(mean > 0.0)) {
        throw std::domain_error("moments: mean sojourn is not positive");
    }
    return {mean, 1.0 / mean};
}

namespace {

// Sup distance between consecutive iterates for a vector of components.
double max_step(const std::vector<GridFunction>& a, const std::vector<GridFunction>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, sup_distance(a[i], b[i]));
    }
    return d;
}

double aposteriori(double c, double step)
{
    if (!(c < 1.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return c / (1.0 - c) * step;
}

// Residual check for orders of one item on a bidirectional carousel:
// F(x) = 1 - 2 int_0^(1/2 - x) F for x <= 1/2, and 1 beyond.
GridFunction apply_single_item_bi(const GridFunction& f)
{
    const PrefixMoments prefix(f, 0);
    return map_nodes(f, [&](double x) {
        return x >= 0.5 ? 1.0 : 1.0 - 2.0 * prefix(0, 0.5 - x);
    });
}

SolveResult single_item_bi(const SolverConfig& cfg)
{
    auto cdf = GridFunction::sample(1.0, cfg.grid_points, closed_form_single_item_bi);
    SolveResult r{cdf, {}, {}, 0.0, 0, 1.0, 0.0, 0.0, 0.0};
    r.residual = sup_distance(apply_single_item_bi(cdf), cdf);
    const auto mom = moments(cdf);
    r.mean_sojourn = mom.mean_sojourn;
    r.throughput = mom.throughput;
    r.iterates.push_back(cdf);
    return r;
}

}  // namespace

SolveResult solve_sojourn(StrategyId strategy, int n, const SolverConfig& cfg)
{
    cfg.validate();
    if (!solver_supported(strategy)) {
        throw std::domain_error("strategy " + std::string(strategy_name(strategy)) +
                                " has no integral operator");
    }
    if (n == 1) {
        if (strategy == StrategyId::UniNearest) {
            throw std::domain_error("uni-nearest with n = 1 is only available by simulation");
        }
        return single_item_bi(cfg);
    }
    if (n < 1) {
        throw std::domain_error("order size must be >= 1");
    }

    const double c = contraction_bound(strategy, n);
    GridFunction current = [&] {
        switch (cfg.initial) {
        case InitialGuess::UpperEnvelope:
            return upper_envelope(strategy, n, cfg.grid_points);
        case InitialGuess::Custom:
            return *cfg.custom_initial;
        case InitialGuess::Zero:
        default:
            return GridFunction::constant(1.0, cfg.grid_points, 0.0);
        }
    }();

    SolveResult r{current, {}, {}, 0.0, 0, c, 0.0, 0.0, 0.0};
    if (cfg.history_cap > 0) {
        r.iterates.push_back(current);
    }
    for (int k = 1; k <= cfg.max_iter; ++k) {
        GridFunction next = apply_operator(strategy, current, n);
        const double step = sup_distance(next, current);
        r.steps.push_back(step);
        if (r.iterates.size() < cfg.history_cap) {
            r.iterates.push_back(next);
        }
        current = std::move(next);
        if (step < cfg.tol) {
            r.iterations = k;
            r.aposteriori_error = aposteriori(c, step);
            r.residual = sup_distance(apply_operator(strategy, current, n), current);
            const auto mom = moments(current);
            r.mean_sojourn = mom.mean_sojourn;
            r.throughput = mom.throughput;
            r.cdf = std::move(current);
            return r;
        }
    }
    const double last = r.steps.back();
    throw ConvergenceError("solve_sojourn: no convergence after " + std::to_string(cfg.max_iter) +
                               " iterations (last step " + std::to_string(last) + ")",
                           current, last, cfg.max_iter);
}

VariableSolveResult solve_variable_uni(const OrderSizeModel& sizes, const SolverConfig& cfg)
{
    cfg.validate();
    const auto& pmf = sizes.masses();
    const std::size_t count = pmf.size();
    const std::size_t points = cfg.grid_points;

    double c = 0.0;
    for (const auto& mass : pmf) {
        c = std::max(c, mass.size == 1 ? 1.0 : std::pow(static_cast<double>(mass.size - 1) / mass.size,
                                                        mass.size - 1));
    }

    auto mix = [&](const std::vector<GridFunction>& comps) {
        std::vector<double> v(points, 0.0);
        for (std::size_t j = 0; j < count; ++j) {
            for (std::size_t i = 0; i < points; ++i) {
                v[i] += pmf[j].prob * comps[j][i];
            }
        }
        return GridFunction(1.0, std::move(v));
    };

    auto apply = [&](const std::vector<GridFunction>& comps) {
        const PrefixMoments prefix(mix(comps), 0);
        std::vector<GridFunction> out;
        out.reserve(count);
        for (std::size_t j = 0; j < count; ++j) {
            const int m = pmf[j].size;
            out.push_back(map_nodes(comps[j], [&](double x) {
                const double g = prefix(0, 1.0 - x);
                if (m == 1) {
                    return 1.0 - g;
                }
                return single_dir_envelope(x, m) - m * ipow(x, m - 1) * g;
            }));
        }
        return out;
    };

    std::vector<GridFunction> current;
    for (std::size_t j = 0; j < count; ++j) {
        switch (cfg.initial) {
        case InitialGuess::Custom:
            current.push_back(*cfg.custom_initial);
            break;
        case InitialGuess::UpperEnvelope:
            current.push_back(GridFunction::constant(1.0, points, 0.0));
            break;
        case InitialGuess::Zero:
        default:
            current.push_back(GridFunction::constant(1.0, points, 0.0));
            break;
        }
    }
    if (cfg.initial == InitialGuess::UpperEnvelope) {
        current = apply(current);
    }

    SolveResult summary{mix(current), {}, {}, 0.0, 0, c, 0.0, 0.0, 0.0};
    if (cfg.history_cap > 0) {
        summary.iterates.push_back(summary.cdf);
    }
    for (int k = 1; k <= cfg.max_iter; ++k) {
        auto next = apply(current);
        const double step = max_step(next, current);
        summary.steps.push_back(step);
        current = std::move(next);
        if (summary.iterates.size() < cfg.history_cap) {
            summary.iterates.push_back(mix(current));
        }
        if (step < cfg.tol) {
            summary.iterations = k;
            summary.aposteriori_error = aposteriori(c, step);
            summary.residual = max_step(apply(current), current);
            summary.cdf = mix(current);
            const auto mom = moments(summary.cdf);
            summary.mean_sojourn = mom.mean_sojourn;
            summary.throughput = mom.throughput;
            VariableSolveResult out{{}, current, summary.cdf, std::move(summary)};
            for (const auto& mass : pmf) {
                out.sizes.push_back(mass.size);
            }
            return out;
        }
    }
    const double last = summary.steps.back();
    throw ConvergenceError("solve_variable_uni: no convergence after " +
                               std::to_string(cfg.max_iter) + " iterations",
                           mix(current), last, cfg.max_iter);
}

}  // namespace carousel
