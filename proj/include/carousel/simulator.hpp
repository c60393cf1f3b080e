#pragma once

#include "carousel/grid_function.hpp"
#include "carousel/order_size.hpp"
#include "carousel/strategy.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace carousel {

/// Random stream for one replication: std::mt19937_64 seeded through
/// std::seed_seq from (base_seed, replication). Both algorithms are fully
/// specified by the standard, so streams are identical on every platform.
class Rng {
public:
    Rng(std::uint64_t base_seed, std::uint64_t stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Item positions of one order, ascending in [0, 1), measured in the rotation
/// direction from the carousel's current stopping point.
struct OrderRealization {
    std::vector<double> positions;
};

/// Preparation time B (rotation to the first item, overlapping the picker's
/// work elsewhere) and travel time A (rotation over the rest of the order).
struct PrepTravel {
    double prep;
    double travel;
};

/// m independent uniform positions, sorted. Throws std::domain_error if m < 1.
OrderRealization generate_order(Rng& rng, int m);

/// Geometry of a strategy on one order. budget is the previous sojourn and
/// is only consulted by BiGapFallback.
PrepTravel prep_and_travel(StrategyId strategy, const OrderRealization& order, double budget = 0.0);

struct SimConfig {
    StrategyId strategy_a = StrategyId::BiNearestShortest;
    StrategyId strategy_b = StrategyId::BiNearestShortest;
    OrderSizeModel orders_a = OrderSizeModel::fixed(2);
    OrderSizeModel orders_b = OrderSizeModel::fixed(2);
    std::int64_t total_orders = 100000;   ///< per replication, both carousels
    std::int64_t warmup_orders = 1000;
    int replications = 10;
    std::uint64_t base_seed = 42;
    unsigned threads = 0;                 ///< 0 = hardware concurrency
    std::size_t cdf_grid_points = kDefaultGridPoints;
    bool keep_samples = false;            ///< retain pooled post-warmup sojourns

    void validate() const;
};

/// Point estimate with a Student-t 95% half-width across replications;
/// the half-width is missing with fewer than two replications.
struct Estimate {
    double value = 0.0;
    std::optional<double> half_width;

    double low() const noexcept { return value - half_width.value_or(0.0); }
    double high() const noexcept { return value + half_width.value_or(0.0); }
};

struct ReplicationStats {
    std::int64_t orders = 0;     ///< counted (post-warmup) orders
    double mean_sojourn = 0.0;
    double throughput = 0.0;     ///< orders / total sojourn time
    double max_sojourn = 0.0;
};

struct SimulationSummary {
    Estimate mean_sojourn;
    Estimate throughput;
    /// Pooled empirical CDF on a uniform grid over [0, 1], or [0, 2] if any
    /// sojourn exceeds 1.
    GridFunction empirical_cdf;
    double max_sojourn = 0.0;
    std::vector<ReplicationStats> replications;
    /// Sorted pooled sojourns, only when SimConfig::keep_samples is set.
    std::vector<double> samples;
};

SimulationSummary run_simulation(const SimConfig& cfg);

/// Sup distance between the empirical CDF of sorted samples and a CDF of a
/// nonnegative variable that is continuous on (0, inf) (an atom at 0 is fine).
double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)>& cdf);

/// Student-t quantile at probability p in (0, 1).
double t_quantile(double p, int dof);

/// Two-sided 95% Student-t quantile with the given degrees of freedom.
double t_quantile_975(int dof);

// ---------------------------------------------------------------------------
// Strategy comparison sweeps
// ---------------------------------------------------------------------------

enum class ScenarioKind {
    BalancedFixed,    ///< both carousels fixed n
    UnbalancedFixed,  ///< carousel A fixed 1, carousel B fixed n
    TwoPointMixture,  ///< both carousels: 1 with prob p, else 2n - 1
    UniformRange,     ///< both carousels: uniform on 1..2n-1
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::BalancedFixed;
    double p = 0.5;   ///< TwoPointMixture only

    OrderSizeModel carousel_a(int n) const;
    OrderSizeModel carousel_b(int n) const;
    /// Average order size over both carousels (the x-axis of a sweep).
    double average_size(int n) const;
};

struct CompareRow {
    StrategyId strategy;
    int n;
    double average_size;
    Estimate throughput;
    Estimate mean_sojourn;
};

/// One simulation per (strategy, n); both carousels use the same strategy.
/// Every cell reuses base.base_seed, so comparisons share random numbers.
std::vector<CompareRow> compare_strategies(std::span<const StrategyId> strategies,
                                           std::span<const int> n_values, const Scenario& scenario,
                                           const SimConfig& base);

}  // namespace carousel
