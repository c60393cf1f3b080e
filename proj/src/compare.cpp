#include "carousel/simulator.hpp"

#include <stdexcept>

namespace carousel {

OrderSizeModel Scenario::carousel_a(int n) const
{
    switch (kind) {
    case ScenarioKind::UnbalancedFixed:
        return OrderSizeModel::fixed(1);
    default:
        return carousel_b(n);
    }
}

OrderSizeModel Scenario::carousel_b(int n) const
{
    if (n < 1) {
        throw std::domain_error("scenario: n must be >= 1");
    }
    switch (kind) {
    case ScenarioKind::BalancedFixed:
    case ScenarioKind::UnbalancedFixed:
        return OrderSizeModel::fixed(n);
    case ScenarioKind::TwoPointMixture:
        if (!(p > 0.0 && p < 1.0)) {
            throw std::domain_error("scenario: mixture probability must be in (0, 1)");
        }
        if (n == 1) {
            return OrderSizeModel::fixed(1);
        }
        return OrderSizeModel::discrete({{1, p}, {2 * n - 1, 1.0 - p}});
    case ScenarioKind::UniformRange:
        return OrderSizeModel::uniform(1, 2 * n - 1);
    }
    throw std::domain_error("scenario: unknown kind");
}

double Scenario::average_size(int n) const
{
    return 0.5 * (carousel_a(n).mean() + carousel_b(n).mean());
}

std::vector<CompareRow> compare_strategies(std::span<const StrategyId> strategies,
                                           std::span<const int> n_values, const Scenario& scenario,
                                           const SimConfig& base)
{
    if (strategies.empty() || n_values.empty()) {
        throw std::domain_error("compare_strategies: empty strategy or size list");
    }
    std::vector<CompareRow> rows;
    for (StrategyId s : strategies) {
        for (int n : n_values) {
            SimConfig cfg = base;
            cfg.strategy_a = s;
            cfg.strategy_b = s;
            cfg.orders_a = scenario.carousel_a(n);
            cfg.orders_b = scenario.carousel_b(n);
            cfg.keep_samples = false;
            const auto summary = run_simulation(cfg);
            rows.push_back({s, n, scenario.average_size(n), summary.throughput, summary.mean_sojourn});
        }
    }
    return rows;
}

}  // namespace carousel
