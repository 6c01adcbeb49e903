#include "rdchain/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdchain/ellipsoid.hpp"
#include "rdchain/error.hpp"
#include "rdchain/quadrature.hpp"
#include "rdchain/sparse.hpp"

namespace rdchain {

double PowerLawG::operator()(double E) const { return E <= 0.0 ? 0.0 : coef * std::pow(E, exponent); }

PowerLawG ellipsoid_G(double beta) { return {c_beta(beta).C, (2.0 * beta - 1.0) / (4.0 * beta)}; }

PowerLawG sparse_G(double q, double r, double d) {
  return {sparse_width_moment_G(q, r, d, 1.0), (1.0 - q) / (2.0 - q)};
}

double psi_rhs(double psi, double lambda, double n, const PowerLawG& G, TailVariant variant,
               const TailConstants& k) {
  const double a = variant == TailVariant::LogSobolev ? 1.0 : 1.0 / k.C;
  const double b = variant == TailVariant::LogSobolev ? 1.0 : k.K_prime * k.C;
  auto term = [&](double eps) {
    return -a * eps + b * (2.0 * lambda / std::sqrt(n)) * G((eps + psi) / lambda) +
           b * std::sqrt(8.0 * eps * lambda * (eps + psi) / n);
  };
  // Log grid over eps, then golden refinement around the best cell. The value
  // at eps -> 0 is included as a candidate.
  const double scale = std::max({psi, lambda, 1.0});
  const double lo = std::log(scale * 1e-14);
  const double hi = std::log(scale * 1e8);
  const int cells = 400;
  double best = term(0.0);
  int best_i = -1;
  for (int i = 0; i <= cells; ++i) {
    const double v = term(std::exp(lo + (hi - lo) * i / cells));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i >= 0) {
    const double x0 = lo + (hi - lo) * std::max(0, best_i - 1) / cells;
    const double x1 = lo + (hi - lo) * std::min(cells, best_i + 1) / cells;
    const Maximum m = golden_max([&](double x) { return term(std::exp(x)); }, x0, x1, 1e-13);
    best = std::max(best, m.value);
  }
  return best;
}

double psi_bound(double lambda, double n, const PowerLawG& G, TailVariant variant, const TailConstants& constants) {
  if (!(lambda > 0.0) || !(n > 0.0)) fail(ErrorKind::InvalidArgument, "lambda and n must be positive");
  if (G.exponent >= 1.0) fail(ErrorKind::UnsupportedGrowth, "width-moment exponent must be below 1");
  const double cap = 1e6;
  auto gap = [&](double psi) { return psi_rhs(psi, lambda, n, G, variant, constants) - psi; };
  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (lo > cap) fail(ErrorKind::Diverged, "no fixed-point crossing below 1e6");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) >= 0.0) lo = mid; else hi = mid;
  }
  return lo;
}

double tail_from_psi(double psi_bar, double lambda, double t) {
  return std::min(1.0, std::exp(psi_bar - lambda * t * t));
}

double tail_threshold(double psi_bar, double lambda, double p) {
  return std::sqrt(std::max(0.0, (psi_bar - std::log(p)) / lambda));
}

}  // namespace rdchain
