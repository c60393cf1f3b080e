#include "carousel/grid_function.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

using carousel::GridFunction;
using Catch::Approx;

namespace {

GridFunction sampled(std::size_t n, double (*fn)(double), double x_max = 1.0)
{
    return GridFunction::sample(x_max, n, fn);
}

double square(double x) { return x * x; }
double identity(double x) { return x; }

}  // namespace

TEST_CASE("construction rejects invalid grids", "[grid]")
{
    CHECK_THROWS_AS(GridFunction(0.0, {0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(GridFunction(1.0, {0, 1}), std::domain_error);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(GridFunction(1.0, {nan, nan, nan}), std::domain_error);
    CHECK_THROWS_AS(GridFunction(1.0, {0, std::numeric_limits<double>::infinity(), 1}), std::domain_error);

    const GridFunction f(2.0, {0, 1, 2, 3, 4});
    CHECK(f.size() == 5);
    CHECK(f.step() == 0.5);
    CHECK(f.node(3) == 1.5);
}

TEST_CASE("sample pins the last node to x_max", "[grid]")
{
    const auto f = GridFunction::sample(0.3, 7, identity);
    CHECK(f[6] == 0.3);
    CHECK(f[0] == 0.0);
}

TEST_CASE("eval interpolates linearly", "[grid]")
{
    CHECK(eval(sampled(17, identity), 0.5) == Approx(0.5).margin(1e-15));
    CHECK(eval(GridFunction::constant(1.0, 9, 1.0), 0.317) == 1.0);

    const auto f = sampled(1025, square);
    const double h = f.step();
    CHECK(std::abs(eval(f, 0.5) - 0.25) <= h * h);

    // exact at nodes
    for (std::size_t i = 0; i < f.size(); i += 97) {
        CHECK(eval(f, f.node(i)) == f[i]);
    }
    CHECK_THROWS_AS(eval(f, -1e-9), std::domain_error);
    CHECK_THROWS_AS(eval(f, 1.0 + 1e-9), std::domain_error);
}

TEST_CASE("interpolation error is second order", "[grid]")
{
    auto max_err = [](std::size_t n) {
        const auto f = GridFunction::sample(1.0, n, [](double x) { return std::sin(3.0 * x); });
        double e = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double x = k / 1000.0 * 0.999 + 0.0003;
            e = std::max(e, std::abs(eval(f, x) - std::sin(3.0 * x)));
        }
        return e;
    };
    const double coarse = max_err(65);
    const double fine = max_err(129);
    CHECK(coarse / fine == Approx(4.0).epsilon(0.15));
}

TEST_CASE("integrate_prefix is the trapezoid antiderivative", "[grid]")
{
    const auto ones = GridFunction::constant(1.0, 33, 1.0);
    const auto g = integrate_prefix(ones);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g[i] == Approx(ones.node(i)).margin(1e-15));
    }

    const auto zero = integrate_prefix(GridFunction::constant(1.0, 33, 0.0));
    for (double v : zero.values()) {
        CHECK(v == 0.0);
    }

    const auto lin = integrate_prefix(GridFunction::sample(1.0, 1025, [](double x) { return 2.0 * x; }));
    CHECK(lin[lin.size() - 1] == Approx(1.0).margin(1e-14));
}

TEST_CASE("prefix of a nonnegative function is nondecreasing", "[grid][property]")
{
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(101);
        for (double& x : v) {
            x = u(gen);
        }
        const auto g = integrate_prefix(GridFunction(1.0, v));
        for (std::size_t i = 1; i < g.size(); ++i) {
            CHECK(g[i] >= g[i - 1]);
        }
    }
}

TEST_CASE("sup_distance", "[grid]")
{
    const auto x = sampled(1025, identity);
    const auto x2 = sampled(1025, square);
    CHECK(sup_distance(x, x) == 0.0);
    CHECK(sup_distance(GridFunction::constant(1.0, 5, 0.0), GridFunction::constant(1.0, 5, 1.0)) == 1.0);
    CHECK(std::abs(sup_distance(x, x2) - 0.25) <= x.step());
    CHECK_THROWS_AS(sup_distance(x, sampled(513, identity)), std::domain_error);
    CHECK_THROWS_AS(sup_distance(x, sampled(1025, identity, 2.0)), std::domain_error);
}

TEST_CASE("sup_distance is a metric", "[grid][property]")
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random = [&] {
        std::uniform_int_distribution<std::size_t> len(3, 40);
        return len(gen);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = random();
        auto make = [&] {
            std::vector<double> v(n);
            for (double& x : v) {
                x = u(gen);
            }
            return GridFunction(1.0, v);
        };
        const auto f = make();
        const auto g = make();
        const auto h = make();
        CHECK(sup_distance(f, g) == sup_distance(g, f));
        CHECK(sup_distance(f, h) <= sup_distance(f, g) + sup_distance(g, h) + 1e-15);
        CHECK(sup_distance(f, f) == 0.0);
        CHECK(sup_distance(f, g) > 0.0);
    }
}

TEST_CASE("clip_unit clamps into [0, 1]", "[grid]")
{
    const auto c = clip_unit(GridFunction(1.0, {-0.1, 0.5, 1.2}));
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.5);
    CHECK(c[2] == 1.0);
    const GridFunction inside(1.0, {0.0, 0.25, 1.0});
    CHECK(sup_distance(clip_unit(inside), inside) == 0.0);
}

TEST_CASE("integral is exact for the interpolant", "[grid]")
{
    CHECK(integral(sampled(9, identity)) == Approx(0.5).margin(1e-15));
    const auto f = sampled(1025, square);
    CHECK(std::abs(integral(f) - 1.0 / 3.0) <= f.step() * f.step());
}

TEST_CASE("PrefixMoments are exact for piecewise-linear functions", "[grid]")
{
    // f(z) = z on 5 nodes: int_0^t z^k * z dz = t^(k+2) / (k+2) at any t
    const auto f = sampled(5, identity);
    const carousel::PrefixMoments m(f, 4);
    for (double t : {0.0, 0.1, 0.3333, 0.5, 0.87, 1.0}) {
        for (int k = 0; k <= 4; ++k) {
            CHECK(m(k, t) == Approx(std::pow(t, k + 2) / (k + 2)).margin(1e-14));
        }
    }
    // clamped outside the domain
    CHECK(m(0, 2.0) == Approx(0.5).margin(1e-15));
    CHECK(m(0, -1.0) == 0.0);

    std::vector<double> all(5);
    m.all(0.6, all);
    for (int k = 0; k <= 4; ++k) {
        CHECK(all[static_cast<std::size_t>(k)] == Approx(m(k, 0.6)).margin(1e-15));
    }
}

TEST_CASE("PrefixMoments match integrate_prefix at the nodes", "[grid]")
{
    const auto f = GridFunction::sample(1.0, 65, [](double x) { return std::cos(5.0 * x); });
    const carousel::PrefixMoments m(f, 0);
    const auto g = integrate_prefix(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(m(0, f.node(i)) == Approx(g[i]).margin(1e-14));
    }
}

TEST_CASE("trapezoid_on_grid handles partial end cells", "[grid]")
{
    const double h = 1.0 / 64;
    // exact for linear integrands whatever the limits
    auto lin = [](double x) { return 3.0 * x + 1.0; };
    for (auto [a, b] : {std::pair{0.0, 1.0}, {0.013, 0.731}, {0.2, 0.2 + h / 3}, {0.5, 0.5 + h}}) {
        const double exact = 1.5 * (b * b - a * a) + (b - a);
        CHECK(carousel::trapezoid_on_grid(lin, a, b, h) == Approx(exact).margin(1e-13));
    }
    CHECK(carousel::trapezoid_on_grid(lin, 0.7, 0.3, h) == 0.0);
    CHECK(carousel::trapezoid_on_grid(lin, 0.3, 0.3, h) == 0.0);
}
