#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace carousel {

/// Default number of nodes on [0, 1]; 2048 cells halve cleanly under refinement.
inline constexpr std::size_t kDefaultGridPoints = 2049;

/// A real function sampled on the uniform grid x_i = i * x_max / (n - 1).
///
/// Immutable after construction. Between nodes the function is understood as
/// its piecewise-linear interpolant, and every integral in this library is
/// taken of that interpolant.
class GridFunction {
public:
    /// Throws std::domain_error unless x_max > 0, values.size() >= 3 and all
    /// values are finite.
    GridFunction(double x_max, std::vector<double> values);

    static GridFunction constant(double x_max, std::size_t n_points, double value);
    static GridFunction sample(double x_max, std::size_t n_points,
                               const std::function<double(double)>& fn);

    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return values_.size(); }
    double step() const noexcept { return x_max_ / static_cast<double>(values_.size() - 1); }
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * step(); }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_grid(const GridFunction& other) const noexcept;

private:
    double x_max_;
    std::vector<double> values_;
};

/// Piecewise-linear interpolation; exact at the nodes.
/// Throws std::domain_error when x is outside [0, x_max].
double eval(const GridFunction& f, double x);

/// Trapezoid antiderivative G(x_i) = int_0^{x_i} f, with G(0) = 0.
GridFunction integrate_prefix(const GridFunction& f);

/// Sup norm of f - g over the nodes. Throws std::domain_error on grid mismatch.
double sup_distance(const GridFunction& f, const GridFunction& g);

/// Clamp every value to [0, 1].
GridFunction clip_unit(const GridFunction& f);

/// Exact integral of the interpolant of f over [0, x_max].
double integral(const GridFunction& f);

/// Antiderivatives int_0^t z^k f(z) dz of the interpolant for k = 0..max_power,
/// evaluated exactly at any t in [0, x_max] (not only at nodes).
class PrefixMoments {
public:
    PrefixMoments(const GridFunction& f, int max_power);

    int max_power() const noexcept { return max_power_; }

    /// int_0^t z^k f(z) dz; t is clamped to [0, x_max].
    double operator()(int k, double t) const;

    /// All moments k = 0..max_power at t, written to out[0..max_power].
    void all(double t, std::span<double> out) const;

private:
    GridFunction f_;
    int max_power_;
    // cumulative_[k][i] = int_0^{x_i} z^k f(z) dz
    std::vector<std::vector<double>> cumulative_;
};

/// Composite trapezoid rule for fn over [a, b] on the nodes of a uniform grid
/// with spacing h anchored at 0. Partial cells at both ends are integrated
/// with their own trapezoid so the limits need not be nodes. Returns 0 when
/// b <= a.
template <class Fn>
double trapezoid_on_grid(Fn&& fn, double a, double b, double h)
{
    if (!(b > a)) {
        return 0.0;
    }
    constexpr double snap = 1e-9;
    const double fa = a / h;
    const double fb = b / h;
    // first node strictly inside (a, b) and last node strictly inside
    auto first = static_cast<long long>(fa + snap) + 1;
    auto last = static_cast<long long>(fb - snap);
    if (static_cast<double>(last) >= fb - snap) {
        --last;
    }
    if (first > last) {
        return 0.5 * (b - a) * (fn(a) + fn(b));
    }
    double sum = 0.0;
    double prev_x = a;
    double prev_f = fn(a);
    for (long long i = first; i <= last; ++i) {
        const double x = static_cast<double>(i) * h;
        const double fx = fn(x);
        sum += 0.5 * (x - prev_x) * (prev_f + fx);
        prev_x = x;
        prev_f = fx;
    }
    sum += 0.5 * (b - prev_x) * (prev_f + fn(b));
    return sum;
}

}  // namespace carousel
