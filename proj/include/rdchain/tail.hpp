#pragma once

namespace rdchain {

/// Width-moment function of power-law form coef * E^exponent.
struct PowerLawG {
  double coef = 0.0;
  double exponent = 0.5;
  double operator()(double E) const;
};

PowerLawG ellipsoid_G(double beta);
PowerLawG sparse_G(double q, double r, double d);

enum class TailVariant { LogSobolev, Subgaussian };

struct TailConstants {
  double C = 1.0;
  double K_prime = 432.0;
};

/// RHS(psi) = sup_eps { -eps + (2 lam / sqrt n) G((eps + psi)/lam) + sqrt(8 eps lam (eps + psi) / n) }
/// (the subgaussian variant scales the three terms by 1/C, K'C and K'C).
double psi_rhs(double psi, double lambda, double n, const PowerLawG& G, TailVariant variant = TailVariant::LogSobolev,
               const TailConstants& constants = {});

/// Largest psi >= 0 with psi <= RHS(psi). Exponents >= 1 raise UnsupportedGrowth;
/// no crossing below 1e6 raises Diverged.
double psi_bound(double lambda, double n, const PowerLawG& G, TailVariant variant = TailVariant::LogSobolev,
                 const TailConstants& constants = {});

/// min(1, exp(psi_bar - lambda t^2))
double tail_from_psi(double psi_bar, double lambda, double t);

/// t with exp(psi_bar - lambda t^2) = p.
double tail_threshold(double psi_bar, double lambda, double p);

}  // namespace rdchain
