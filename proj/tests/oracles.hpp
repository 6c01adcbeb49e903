#pragma once

// Independent reference computations used only by tests and the acceptance
// suite. None of these share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace rdchain::oracle {

inline double binary_entropy_nats(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1 - p) * std::log(1 - p);
}

/// Uniform source on {0, 1} with squared (= Hamming) distortion D <= 1/2.
inline double binary_uniform_rd(double D) { return D >= 0.5 ? 0.0 : std::log(2.0) - binary_entropy_nats(D); }

inline double gaussian_rd(double var, double D) { return D >= var ? 0.0 : 0.5 * std::log(var / D); }

/// Projection onto sum z^2/a^2 <= 1 by golden-section ascent on the concave dual
/// q(l) = sum x^2 l / (a^2 + l) - l.
inline Eigen::VectorXd ellipsoid_dual_projection(const Eigen::VectorXd& x, const Eigen::VectorXd& a) {
  const Eigen::ArrayXd a2 = a.array().square();
  if ((x.array().square() / a2).sum() <= 1.0) return x;
  auto q = [&](double l) { return (x.array().square() * l / (a2 + l)).sum() - l; };
  double lo = 0.0;
  double hi = std::sqrt((x.array().square() * a2).sum()) + 1.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = q(c);
  double fd = q(d);
  for (int it = 0; it < 400 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    if (fc > fd) {
      hi = d; d = c; fd = fc; c = hi - g * (hi - lo); fc = q(c);
    } else {
      lo = c; c = d; fc = fd; d = lo + g * (hi - lo); fd = q(d);
    }
  }
  const double l = 0.5 * (lo + hi);
  return (x.array() * a2 / (a2 + l)).matrix();
}

/// Sup over a fine t-grid of t (#{|x_i| > t})^{1/q}.
inline double weak_lq_radius_grid(const Eigen::VectorXd& x, double q, int points = 100000) {
  const double top = x.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = top * static_cast<double>(i) / points;
    const double count = static_cast<double>((x.array().abs() > t).count());
    best = std::max(best, t * std::pow(count, 1.0 / q));
  }
  return best;
}

struct GridProjection {
  double distance = 0.0;
  double resolution = 0.0;  // half the diagonal of a grid cell
};

/// Smallest distance from x to a feasible point of a 41^3 grid on [-r, r]^3.
inline GridProjection weak_lq_grid_projection(const Eigen::Vector3d& x, double q, double r, int per_axis = 41) {
  const double h = 2.0 * r / (per_axis - 1);
  auto cap = [&](int k) { return r * std::pow(static_cast<double>(k), -1.0 / q) * (1 + 1e-12); };
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      for (int k = 0; k < per_axis; ++k) {
        double m[3] = {std::abs(-r + i * h), std::abs(-r + j * h), std::abs(-r + k * h)};
        std::sort(m, m + 3, std::greater<>());
        if (m[0] > cap(1) || m[1] > cap(2) || m[2] > cap(3)) continue;
        const Eigen::Vector3d z(-r + i * h, -r + j * h, -r + k * h);
        best = std::min(best, (z - x).norm());
      }
  return {best, 0.5 * h * std::sqrt(3.0)};
}

/// Best assignment value by enumerating permutations (n <= 8).
inline double brute_force_assignment(const Eigen::MatrixXd& value) {
  std::vector<int> perm(static_cast<std::size_t>(value.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += value(static_cast<Eigen::Index>(i), perm[i]);
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

}  // namespace rdchain::oracle
