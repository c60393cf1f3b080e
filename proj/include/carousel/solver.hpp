#pragma once

#include "carousel/grid_function.hpp"
#include "carousel/order_size.hpp"
#include "carousel/strategy.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace carousel {

// ---------------------------------------------------------------------------
// Integral operators. Each maps a grid function F on [0, 1] (a candidate
// sojourn-time CDF) to Omega F, evaluated at the nodes of the same grid and
// clipped to [0, 1]. F is treated as its piecewise-linear interpolant; every
// inner z-integral is exact for it, and outer y-integrals use the trapezoid
// rule with partial end cells at the analytic limits.
// ---------------------------------------------------------------------------

/// Omega F(x) = n x^(n-1) - (n-1) x^n - n x^(n-1) int_0^(1-x) F.
GridFunction apply_operator_uni_nearest(const GridFunction& f, int n);

/// Nearest item, same direction:
/// Omega F(x) = n x^(n-1) - (n-1) x^n
///              - 2n(n-1) int_{(2x-1)^+}^x y^(n-2) int_0^((1+y)/2-x) F(z) dz dy.
GridFunction apply_operator_bi_nearest(const GridFunction& f, int n);

/// Nearest item, then the shorter direction. Three double integrals around
/// the travel CDF; for n = 2 the ((.)^+)^0 kernels are indicators.
GridFunction apply_operator_bi_shortest(const GridFunction& f, int n);

/// Dispatch on a solver-supported strategy.
GridFunction apply_operator(StrategyId strategy, const GridFunction& f, int n);

/// Lipschitz constant of the operator in the sup norm:
/// ((n-1)/n)^(n-1) for the nearest-item operators, 11/12 for the shortest one.
double contraction_bound(StrategyId strategy, int n);

/// Omega applied to F = 0, i.e. the travel-time CDF. It is also an upper
/// bound of the fixed point for the nearest-item operators.
GridFunction upper_envelope(StrategyId strategy, int n, std::size_t grid_points);

/// Stationary sojourn CDF for orders of one item on a bidirectional carousel.
double closed_form_single_item_bi(double x);

// ---------------------------------------------------------------------------
// Fixed-point iteration
// ---------------------------------------------------------------------------

enum class InitialGuess { Zero, UpperEnvelope, Custom };

struct SolverConfig {
    std::size_t grid_points = kDefaultGridPoints;
    double tol = 1e-8;
    int max_iter = 200;
    InitialGuess initial = InitialGuess::Zero;
    std::optional<GridFunction> custom_initial;
    /// Iterates F_0, F_1, ... kept in SolveResult::iterates.
    std::size_t history_cap = 100;

    void validate() const;
};

struct SolveResult {
    GridFunction cdf;
    std::vector<GridFunction> iterates;
    /// Successive sup-distances |F_{k+1} - F_k|, one per application.
    std::vector<double> steps;
    double residual = 0.0;            ///< |Omega F - F| for the returned cdf
    int iterations = 0;               ///< operator applications
    double contraction_bound = 0.0;
    double aposteriori_error = 0.0;   ///< c / (1 - c) times the last step
    double mean_sojourn = 0.0;
    double throughput = 0.0;
};

/// Thrown when the iteration does not reach the tolerance within max_iter.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, GridFunction last, double residual, int iterations)
        : std::runtime_error(what), last_(std::move(last)), residual_(residual),
          iterations_(iterations)
    {
    }

    const GridFunction& last_iterate() const noexcept { return last_; }
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    GridFunction last_;
    double residual_;
    int iterations_;
};

/// Iterates F_{k+1} = Omega F_k until |F_{k+1} - F_k| < tol. For n = 1 the
/// bidirectional strategies return the closed form sampled on the grid; the
/// unidirectional one has no operator for n = 1 and throws.
SolveResult solve_sojourn(StrategyId strategy, int n, const SolverConfig& cfg = {});

struct VariableSolveResult {
    std::vector<int> sizes;                ///< support of the pmf, ascending
    std::vector<GridFunction> per_size;    ///< F^(m) for each size
    GridFunction mixture;                  ///< sum_m p_m F^(m)
    SolveResult summary;                   ///< statistics of the mixture
};

/// Coupled system for the unidirectional first-item strategy with random
/// order sizes. cfg.initial is applied to every component.
VariableSolveResult solve_variable_uni(const OrderSizeModel& sizes, const SolverConfig& cfg = {});

struct Moments {
    double mean_sojourn;
    double throughput;
};

/// Mean int_0^{x_max} (1 - F) and its reciprocal. Throws std::domain_error if
/// F(x_max) is not 1 within 1e-6 or the mean is not positive.
Moments moments(const GridFunction& cdf);

}  // namespace carousel
