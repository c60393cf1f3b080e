#include "carousel/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace carousel {

GridFunction::GridFunction(double x_max, std::vector<double> values)
    : x_max_(x_max), values_(std::move(values))
{
    if (!(x_max_ > 0.0) || !std::isfinite(x_max_)) {
        throw std::domain_error("GridFunction: x_max must be positive and finite");
    }
    if (values_.size() < 3) {
        throw std::domain_error("GridFunction: need at least 3 grid points");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::domain_error("GridFunction: non-finite sample");
        }
    }
}

GridFunction GridFunction::constant(double x_max, std::size_t n_points, double value)
{
    return GridFunction(x_max, std::vector<double>(n_points, value));
}

GridFunction GridFunction::sample(double x_max, std::size_t n_points,
                                  const std::function<double(double)>& fn)
{
    if (n_points < 3) {
        throw std::domain_error("GridFunction: need at least 3 grid points");
    }
    std::vector<double> v(n_points);
    const double h = x_max / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        // pin the last node to x_max exactly
        const double x = (i + 1 == n_points) ? x_max : static_cast<double>(i) * h;
        v[i] = fn(x);
    }
    return GridFunction(x_max, std::move(v));
}

bool GridFunction::same_grid(const GridFunction& other) const noexcept
{
    return x_max_ == other.x_max_ && values_.size() == other.values_.size();
}

namespace {

// Cell index i with x in [x_i, x_{i+1}] and the local coordinate in [0, 1].
std::pair<std::size_t, double> locate(const GridFunction& f, double x)
{
    const std::size_t cells = f.size() - 1;
    const double s = x / f.step();
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i >= cells) {
        return {cells - 1, 1.0};
    }
    return {i, s - static_cast<double>(i)};
}

}  // namespace

double eval(const GridFunction& f, double x)
{
    if (!(x >= 0.0 && x <= f.x_max())) {
        throw std::domain_error("eval: x=" + std::to_string(x) + " outside [0, x_max]");
    }
    const auto [i, t] = locate(f, x);
    if (t == 0.0) {
        return f[i];
    }
    return (1.0 - t) * f[i] + t * f[i + 1];
}

GridFunction integrate_prefix(const GridFunction& f)
{
    std::vector<double> g(f.size());
    const double h = f.step();
    g[0] = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        g[i] = g[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    }
    return GridFunction(f.x_max(), std::move(g));
}

double sup_distance(const GridFunction& f, const GridFunction& g)
{
    if (!f.same_grid(g)) {
        throw std::domain_error("sup_distance: grids differ");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        d = std::max(d, std::abs(f[i] - g[i]));
    }
    return d;
}

GridFunction clip_unit(const GridFunction& f)
{
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) {
        x = std::clamp(x, 0.0, 1.0);
    }
    return GridFunction(f.x_max(), std::move(v));
}

double integral(const GridFunction& f)
{
    const double h = f.step();
    double s = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        s += 0.5 * h * (f[i - 1] + f[i]);
    }
    return s;
}

namespace {

// int_{a}^{b} z^k (f0 + slope (z - a)) dz for a cell starting at a.
double cell_moment(int k, double a, double b, double f0, double slope)
{
    const double ak1 = std::pow(a, k + 1);
    const double bk1 = std::pow(b, k + 1);
    const double ak2 = ak1 * a;
    const double bk2 = bk1 * b;
    const double m_k = (bk1 - ak1) / (k + 1);
    const double m_k1 = (bk2 - ak2) / (k + 2);
    return f0 * m_k + slope * (m_k1 - a * m_k);
}

}  // namespace

PrefixMoments::PrefixMoments(const GridFunction& f, int max_power)
    : f_(f), max_power_(max_power)
{
    if (max_power < 0) {
        throw std::domain_error("PrefixMoments: negative power");
    }
    const double h = f.step();
    cumulative_.assign(static_cast<std::size_t>(max_power) + 1, std::vector<double>(f.size(), 0.0));
    for (int k = 0; k <= max_power; ++k) {
        auto& c = cumulative_[static_cast<std::size_t>(k)];
        for (std::size_t i = 1; i < f.size(); ++i) {
            const double a = f.node(i - 1);
            const double b = f.node(i);
            const double slope = (f[i] - f[i - 1]) / h;
            c[i] = c[i - 1] + cell_moment(k, a, b, f[i - 1], slope);
        }
    }
}

double PrefixMoments::operator()(int k, double t) const
{
    if (k < 0 || k > max_power_) {
        throw std::domain_error("PrefixMoments: power out of range");
    }
    t = std::clamp(t, 0.0, f_.x_max());
    const auto [i, s] = locate(f_, t);
    const auto& c = cumulative_[static_cast<std::size_t>(k)];
    if (s == 0.0) {
        return c[i];
    }
    const double a = f_.node(i);
    const double slope = (f_[i + 1] - f_[i]) / f_.step();
    return c[i] + cell_moment(k, a, t, f_[i], slope);
}

void PrefixMoments::all(double t, std::span<double> out) const
{
    if (out.size() < static_cast<std::size_t>(max_power_) + 1) {
        throw std::domain_error("PrefixMoments::all: output too small");
    }
    t = std::clamp(t, 0.0, f_.x_max());
    const auto [i, s] = locate(f_, t);
    if (s == 0.0) {
        for (int k = 0; k <= max_power_; ++k) {
            out[static_cast<std::size_t>(k)] = cumulative_[static_cast<std::size_t>(k)][i];
        }
        return;
    }
    const double a = f_.node(i);
    const double f0 = f_[i];
    const double slope = (f_[i + 1] - f_[i]) / f_.step();
    double ak1 = a;  // a^(k+1)
    double tk1 = t;
    for (int k = 0; k <= max_power_; ++k) {
        const double ak2 = ak1 * a;
        const double tk2 = tk1 * t;
        const double m_k = (tk1 - ak1) / (k + 1);
        const double m_k1 = (tk2 - ak2) / (k + 2);
        out[static_cast<std::size_t>(k)] =
            cumulative_[static_cast<std::size_t>(k)][i] + f0 * m_k + slope * (m_k1 - a * m_k);
        ak1 = ak2;
        tk1 = tk2;
    }
}

}  // namespace carousel
