#include "carousel/densities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace carousel::densities {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) {
        throw std::domain_error(what);
    }
}

double ipow(double base, int k) noexcept
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= base;
    }
    return r;
}

// Relative slack when checking a support boundary, so that x = (1-y)/2
// computed in floating point is still accepted.
constexpr double kEdge = 1e-12;

}  // namespace

double pos_pow(double base, int k) noexcept
{
    return base > 0.0 ? ipow(base, k) : 0.0;
}

double travel_density_single_dir(double y, int n)
{
    require(n >= 2, "travel_density_single_dir: n must be >= 2");
    require(y >= 0.0 && y <= 1.0, "travel_density_single_dir: y outside [0, 1]");
    if (y <= 0.0 || y >= 1.0) {
        return 0.0;
    }
    return n * (n - 1) * (1.0 - y) * ipow(y, n - 2);
}

double travel_cdf_single_dir(double y, int n)
{
    require(n >= 2, "travel_cdf_single_dir: n must be >= 2");
    require(y >= 0.0 && y <= 1.0, "travel_cdf_single_dir: y outside [0, 1]");
    return n * ipow(y, n - 1) - (n - 1) * ipow(y, n);
}

double prep_cdf_given_travel_uni(double x, double y)
{
    require(y >= 0.0 && y < 1.0, "prep_cdf_given_travel_uni: y outside [0, 1)");
    require(x >= 0.0, "prep_cdf_given_travel_uni: x < 0");
    return std::min(x / (1.0 - y), 1.0);
}

double prep_cdf_given_travel_nearest(double x, double y)
{
    require(y >= 0.0 && y < 1.0, "prep_cdf_given_travel_nearest: y outside [0, 1)");
    require(x >= 0.0, "prep_cdf_given_travel_nearest: x < 0");
    const double half = 0.5 * (1.0 - y);
    return x <= half ? x / half : 1.0;
}

double prep_cdf_shortest(double x, int n)
{
    require(n >= 1, "prep_cdf_shortest: n must be >= 1");
    require(x >= 0.0 && x <= 0.5, "prep_cdf_shortest: x outside [0, 1/2]");
    return 1.0 - ipow(1.0 - 2.0 * x, n);
}

double prep_density_shortest(double x, int n)
{
    require(n >= 1, "prep_density_shortest: n must be >= 1");
    require(x >= 0.0 && x <= 0.5, "prep_density_shortest: x outside [0, 1/2]");
    return 2.0 * n * ipow(1.0 - 2.0 * x, n - 1);
}

double travel_cdf_shortest(double y, int n)
{
    require(n >= 2, "travel_cdf_shortest: n must be >= 2");
    require(y >= 0.0 && y <= 1.0, "travel_cdf_shortest: y outside [0, 1]");
    const double g = std::max(2.0 * y - 1.0, 0.0);
    return 2.0 * ipow(y, n) + n * ipow(y, n - 1) * (1.0 - y) - ipow(g, n) -
           n * ipow(g, n - 1) * (1.0 - y);
}

double travel_density_shortest(double y, int n)
{
    require(n >= 2, "travel_density_shortest: n must be >= 2");
    require(y >= 0.0 && y <= 1.0, "travel_density_shortest: y outside [0, 1]");
    const double g = 2.0 * y - 1.0;
    return n * ipow(y, n - 2) * (y + (n - 1) * (1.0 - y)) -
           n * pos_pow(g, n - 2) * (2.0 * (n - 1) * (1.0 - y) + 2.0 * y - 1.0);
}

double prep_cdf_given_travel_shortest(double x, double y, int n)
{
    require(n >= 3, "prep_cdf_given_travel_shortest: n must be >= 3");
    require(y >= 0.0 && y <= 1.0, "prep_cdf_given_travel_shortest: y outside [0, 1]");
    const double upper = 0.5 * (1.0 - y);
    require(x >= 0.0 && x <= upper + kEdge,
            "prep_cdf_given_travel_shortest: x outside [0, (1-y)/2]");
    const double fa = travel_density_shortest(y, n);
    require(fa > 0.0, "prep_cdf_given_travel_shortest: travel density vanishes at y");
    const double nn1 = static_cast<double>(n) * (n - 1);
    double num = 2.0 * nn1 * ipow(y, n - 2) * x + n * ipow(y, n - 1);
    if (x <= 0.25) {
        num += -n * pos_pow(y - 2.0 * x, n - 1) - 4.0 * nn1 * pos_pow(2.0 * y - 1.0, n - 2) * x;
    }
    return num / fa;
}

double travel_cdf_given_prep_shortest(double y, double x, int n)
{
    require(n >= 3, "travel_cdf_given_prep_shortest: n must be >= 3");
    require(x >= 0.0 && x < 0.5, "travel_cdf_given_prep_shortest: x outside [0, 1/2)");
    const double span = 1.0 - 2.0 * x;
    require(y >= 0.0 && y <= span + kEdge, "travel_cdf_given_prep_shortest: y outside [0, 1-2x]");
    double p = ipow(y / span, n - 1);
    if (x <= 0.25) {
        p += pos_pow((y - 2.0 * x) / span, n - 1) - pos_pow((2.0 * y - 1.0) / span, n - 1);
    }
    return p;
}

double travel_density_given_prep_shortest(double y, double x, int n)
{
    require(n >= 3, "travel_density_given_prep_shortest: n must be >= 3");
    require(x >= 0.0 && x < 0.5, "travel_density_given_prep_shortest: x outside [0, 1/2)");
    const double span = 1.0 - 2.0 * x;
    require(y >= 0.0 && y <= span + kEdge,
            "travel_density_given_prep_shortest: y outside [0, 1-2x]");
    double k = ipow(y, n - 2);
    if (x <= 0.25) {
        k += pos_pow(y - 2.0 * x, n - 2) - 2.0 * pos_pow(2.0 * y - 1.0, n - 2);
    }
    return (n - 1) * k / ipow(span, n - 1);
}

}  // namespace carousel::densities
