#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace carousel {

/// Distribution of the number of items in an order: a fixed size or a
/// discrete probability mass function over distinct positive sizes.
class OrderSizeModel {
public:
    struct Mass {
        int size;
        double prob;
    };

    static OrderSizeModel fixed(int n);
    /// Throws std::domain_error unless all probabilities are positive, sizes
    /// are distinct and >= 1, and the masses sum to 1 within 1e-12.
    static OrderSizeModel discrete(std::vector<Mass> pmf);
    /// Uniform over the integers lo..hi.
    static OrderSizeModel uniform(int lo, int hi);
    /// Parses "1:0.5,9:0.5".
    static OrderSizeModel parse_pmf(std::string_view text);

    bool is_fixed() const noexcept { return fixed_; }
    /// Masses sorted by size; a fixed model has one mass of probability 1.
    const std::vector<Mass>& masses() const noexcept { return pmf_; }
    int max_size() const noexcept { return pmf_.back().size; }
    double mean() const noexcept;

    /// Inverse-CDF draw from a uniform u in [0, 1).
    int draw(double u) const noexcept;

    std::string describe() const;

private:
    OrderSizeModel(bool fixed, std::vector<Mass> pmf);

    bool fixed_;
    std::vector<Mass> pmf_;
    std::vector<double> cumulative_;
};

}  // namespace carousel
