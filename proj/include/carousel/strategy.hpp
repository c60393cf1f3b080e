#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace carousel {

/// The seven picking strategies, in the order they are usually listed.
enum class StrategyId {
    UniNearest,        ///< unidirectional, first item in the rotation direction
    UniAfterGap,       ///< unidirectional, item after the biggest gap
    BiNearestSameDir,  ///< nearest item, keep rotating the same way
    BiNearestShortest, ///< nearest item, then the shorter single direction
    BiAvoidGap,        ///< nearest endpoint of the biggest gap
    BiSecondItem,      ///< direction whose second item is closer
    BiGapFallback,     ///< biggest gap reachable within the previous sojourn
};

inline constexpr std::array<StrategyId, 7> kAllStrategies{
    StrategyId::UniNearest,       StrategyId::UniAfterGap,  StrategyId::BiNearestSameDir,
    StrategyId::BiNearestShortest, StrategyId::BiAvoidGap,  StrategyId::BiSecondItem,
    StrategyId::BiGapFallback,
};

/// True for the strategies that have an integral-equation solver.
constexpr bool solver_supported(StrategyId s) noexcept
{
    return s == StrategyId::UniNearest || s == StrategyId::BiNearestSameDir ||
           s == StrategyId::BiNearestShortest;
}

/// CLI name, e.g. "bi-shortest".
std::string_view strategy_name(StrategyId s) noexcept;

std::optional<StrategyId> parse_strategy(std::string_view name) noexcept;

}  // namespace carousel
