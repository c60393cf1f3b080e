#include "carousel/order_size.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carousel {

OrderSizeModel::OrderSizeModel(bool fixed, std::vector<Mass> pmf)
    : fixed_(fixed), pmf_(std::move(pmf))
{
    double acc = 0.0;
    cumulative_.reserve(pmf_.size());
    for (const auto& m : pmf_) {
        acc += m.prob;
        cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
}

OrderSizeModel OrderSizeModel::fixed(int n)
{
    if (n < 1) {
        throw std::domain_error("order size must be >= 1");
    }
    return OrderSizeModel(true, {{n, 1.0}});
}

OrderSizeModel OrderSizeModel::discrete(std::vector<Mass> pmf)
{
    if (pmf.empty()) {
        throw std::domain_error("empty order-size pmf");
    }
    std::sort(pmf.begin(), pmf.end(), [](const Mass& a, const Mass& b) { return a.size < b.size; });
    double total = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i].size < 1) {
            throw std::domain_error("order sizes must be >= 1");
        }
        if (!(pmf[i].prob > 0.0)) {
            throw std::domain_error("order-size probabilities must be positive");
        }
        if (i > 0 && pmf[i].size == pmf[i - 1].size) {
            throw std::domain_error("duplicate order size in pmf");
        }
        total += pmf[i].prob;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::domain_error("order-size probabilities must sum to 1");
    }
    return OrderSizeModel(false, std::move(pmf));
}

OrderSizeModel OrderSizeModel::uniform(int lo, int hi)
{
    if (lo < 1 || hi < lo) {
        throw std::domain_error("uniform order sizes need 1 <= lo <= hi");
    }
    if (lo == hi) {
        return fixed(lo);
    }
    const int count = hi - lo + 1;
    std::vector<Mass> pmf;
    for (int m = lo; m <= hi; ++m) {
        pmf.push_back({m, 1.0 / count});
    }
    // absorb rounding so the masses sum to one
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
        rest -= pmf[i].prob;
    }
    pmf.back().prob = rest;
    return discrete(std::move(pmf));
}

OrderSizeModel OrderSizeModel::parse_pmf(std::string_view text)
{
    std::vector<Mass> pmf;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        const auto item = text.substr(pos, comma - pos);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("pmf entry '" + std::string(item) + "' is not size:prob");
        }
        Mass m{};
        const auto size_str = item.substr(0, colon);
        auto [p1, e1] = std::from_chars(size_str.data(), size_str.data() + size_str.size(), m.size);
        // from_chars for double is unavailable on older libstdc++
        const std::string prob_str(item.substr(colon + 1));
        std::size_t used = 0;
        try {
            m.prob = std::stod(prob_str, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (e1 != std::errc{} || p1 != size_str.data() + size_str.size() || used == 0 ||
            used != prob_str.size()) {
            throw std::invalid_argument("pmf entry '" + std::string(item) + "' is not size:prob");
        }
        pmf.push_back(m);
        pos = comma + 1;
    }
    return discrete(std::move(pmf));
}

double OrderSizeModel::mean() const noexcept
{
    double m = 0.0;
    for (const auto& e : pmf_) {
        m += e.size * e.prob;
    }
    return m;
}

int OrderSizeModel::draw(double u) const noexcept
{
    if (pmf_.size() == 1) {
        return pmf_.front().size;
    }
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                           pmf_.size() - 1);
    return pmf_[idx].size;
}

std::string OrderSizeModel::describe() const
{
    if (fixed_) {
        return std::to_string(pmf_.front().size);
    }
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        os << pmf_[i].size << ':' << pmf_[i].prob;
    }
    return os.str();
}

}  // namespace carousel
