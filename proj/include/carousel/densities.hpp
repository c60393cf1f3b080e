#pragma once

// Distributions of the preparation time B and the travel time A for the
// strategies with closed forms. Positions are uniform on a carousel of unit
// circumference and n is the order size. All conditional CDFs throw
// std::domain_error outside their support instead of clamping.

namespace carousel::densities {

/// x^k with the convention that a base <= 0 gives 0 even for k = 0, so
/// terms such as ((2y-1)^+)^(n-2) vanish for n = 2 when 2y - 1 <= 0.
double pos_pow(double base, int k) noexcept;

/// Density n(n-1)(1-y)y^(n-2) of the range of n uniforms on (0, 1).
/// Also the travel density of the same-direction nearest-item strategy.
double travel_density_single_dir(double y, int n);

/// CDF of the range: n y^(n-1) - (n-1) y^n, for y in [0, 1].
double travel_cdf_single_dir(double y, int n);

/// P[B <= x | A = y] for the unidirectional first-item strategy: B | A=y is
/// uniform on [0, 1-y].
double prep_cdf_given_travel_uni(double x, double y);

/// P[B <= x | A = y] for the bidirectional nearest-item strategy: B | A=y is
/// uniform on [0, (1-y)/2].
double prep_cdf_given_travel_nearest(double x, double y);

/// P[B <= x] = 1 - (1-2x)^n: distance to the nearest of n items, x in [0, 1/2].
double prep_cdf_shortest(double x, int n);

/// Density 2n(1-2x)^(n-1) of the nearest-item distance.
double prep_density_shortest(double x, int n);

/// Travel time CDF for nearest item followed by the shorter direction.
double travel_cdf_shortest(double y, int n);

/// Density of travel_cdf_shortest.
double travel_density_shortest(double y, int n);

/// P[B <= x | A = y] for nearest item followed by the shorter direction,
/// 0 <= x <= (1-y)/2. Throws when the travel density at y vanishes.
double prep_cdf_given_travel_shortest(double x, double y, int n);

/// P[A <= y | B = x] for nearest item followed by the shorter direction,
/// 0 <= x < 1/2 and 0 <= y <= 1-2x.
double travel_cdf_given_prep_shortest(double y, double x, int n);

/// Density of travel_cdf_given_prep_shortest in y.
double travel_density_given_prep_shortest(double y, double x, int n);

}  // namespace carousel::densities
