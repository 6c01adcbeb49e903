#pragma once

#include <cmath>
#include <iosfwd>
#include <vector>

#include "rdchain/distribution.hpp"

namespace rdchain {

/// Upper constant from the rate-distortion integral bound, and its sharper variant.
inline constexpr double kUpperConstant = 48.0;
inline const double kUpperConstantSharp = 8.0 * std::sqrt(2.0);

struct RdSample {
  double sigma = 0.0;
  double rate = 0.0;   // nats
  double slope = 0.0;  // -dR/d(sigma^2) at the sample; NaN when unknown
};

/// sigma -> R_mu(sigma^2) on a grid that always ends at sigma_m.
struct RdCurve {
  std::vector<RdSample> samples;
  double sigma_m = 0.0;
  double entropy = 0.0;
  bool convex_ok = true;           // R convex in sigma^2: no sample above a neighbour chord by > 1e-6
  double max_convexity_violation = 0.0;
  std::size_t monotone_repairs = 0; // samples lowered to keep R nonincreasing
};

/// 128 log-spaced values in [sigma_m * 1e-3, sigma_m].
std::vector<double> default_sigma_grid(double sigma_m, std::size_t points = 128);

/// An empty grid selects default_sigma_grid.
RdCurve rd_curve(const DiscreteDistribution& mu, std::vector<double> sigma_grid = {}, double tolerance = 1e-7);

struct RdIntegral {
  double value = 0.0;  // head + body
  double head = 0.0;   // [0, smallest grid sigma], capped by sqrt(H) per unit length
  double body = 0.0;
};

/// Integral of sqrt(R(sigma^2)) over [0, sigma_m]. Between samples R is the
/// cubic Hermite interpolant in sigma^2 built from the solver slopes (linear
/// when slopes are unknown). Each piece uses Gauss-Legendre nodes after the
/// change of variable sigma = sigma_2 - (sigma_2 - sigma_1) t^2, which absorbs
/// the square-root zero at sigma_m.
RdIntegral rd_integral_report(const RdCurve& curve);
double rd_integral(const RdCurve& curve);

struct PenalizedIntegral {
  double value = 0.0;
  double head = 0.0;  // alpha_min * F(alpha_min)
  double tail = 0.0;  // sigma_m^2 / alpha_max, exact once the rate at alpha_max is 0
  std::size_t solves = 0;
};

/// Integral over alpha > 0 of F(alpha) = min over channels {alpha^-2 E d^2 + I}.
/// Throws GridTooNarrow when sigma_m^2 / alpha_max exceeds the tolerance.
PenalizedIntegral penalized_rd_integral_report(const DiscreteDistribution& mu, std::vector<double> alpha_grid = {},
                                               double tolerance = 1e-3);
double penalized_rd_integral(const DiscreteDistribution& mu, std::vector<double> alpha_grid = {},
                             double tolerance = 1e-3);
std::vector<double> default_alpha_grid(const DiscreteDistribution& mu, double tolerance, std::size_t per_decade = 64);

/// [0.5 ln(sigma_m^2 / sigma^2)]_+.
double gaussian_rd(double sigma_m_sq, double sigma_sq);

/// Header `sigma,rate_nats`, 17 significant digits.
void write_curve_csv(std::ostream& out, const RdCurve& curve);

}  // namespace rdchain
