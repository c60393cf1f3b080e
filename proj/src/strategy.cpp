#include "carousel/strategy.hpp"

namespace carousel {

namespace {

constexpr std::array<std::string_view, 7> kNames{
    "uni-nearest", "uni-after-gap",  "bi-nearest",      "bi-shortest",
    "bi-avoid-gap", "bi-second-item", "bi-gap-fallback",
};

}  // namespace

std::string_view strategy_name(StrategyId s) noexcept
{
    return kNames[static_cast<std::size_t>(s)];
}

std::optional<StrategyId> parse_strategy(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) {
            return kAllStrategies[i];
        }
    }
    return std::nullopt;
}

}  // namespace carousel
