#include "rdchain/rd_curve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rdchain/blahut_arimoto.hpp"
#include "rdchain/csv.hpp"
#include "rdchain/error.hpp"
#include "rdchain/info.hpp"
#include "rdchain/quadrature.hpp"

namespace rdchain {

std::vector<double> default_sigma_grid(double sigma_m, std::size_t points) {
  std::vector<double> grid;
  if (!(sigma_m > 0.0) || points == 0) return grid;
  if (points == 1) return {sigma_m};
  const double lo = std::log(sigma_m * 1e-3);
  const double hi = std::log(sigma_m);
  for (std::size_t i = 0; i < points; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1)));
  grid.back() = sigma_m;
  return grid;
}

RdCurve rd_curve(const DiscreteDistribution& mu, std::vector<double> sigma_grid, double tolerance) {
  RdSolver solver(mu);
  RdCurve curve;
  curve.sigma_m = std::sqrt(solver.zero_rate_distortion());
  curve.entropy = entropy(mu);
  if (curve.sigma_m == 0.0) {
    curve.samples.push_back({0.0, 0.0, 0.0});
    return curve;
  }
  if (sigma_grid.empty()) sigma_grid = default_sigma_grid(curve.sigma_m);
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0.0) || !std::isfinite(sigma_grid[i]))
      fail(ErrorKind::InvalidArgument, "sigma grid must be positive and finite");
    if (i > 0 && !(sigma_grid[i] > sigma_grid[i - 1]))
      fail(ErrorKind::InvalidArgument, "sigma grid must be strictly increasing");
  }
  if (sigma_grid.back() < curve.sigma_m) {
    sigma_grid.push_back(curve.sigma_m);
  } else if (std::find(sigma_grid.begin(), sigma_grid.end(), curve.sigma_m) == sigma_grid.end()) {
    sigma_grid.insert(std::upper_bound(sigma_grid.begin(), sigma_grid.end(), curve.sigma_m), curve.sigma_m);
  }

  curve.samples.resize(sigma_grid.size());
  // Largest sigma first so each solve warm-starts from a nearby slope.
  for (std::size_t k = sigma_grid.size(); k-- > 0;) {
    const double sigma = sigma_grid[k];
    double rate = 0.0;
    double slope = sigma > curve.sigma_m ? 0.0 : solver.critical_slope();
    if (sigma < curve.sigma_m) {
      const BaResult r = solver.solve_distortion(sigma * sigma, tolerance);
      rate = r.rate;
      slope = r.slope;
    }
    curve.samples[k] = {sigma, std::clamp(rate, 0.0, curve.entropy), slope};
  }
  for (std::size_t k = 1; k < curve.samples.size(); ++k) {
    if (curve.samples[k].rate > curve.samples[k - 1].rate) {
      curve.samples[k].rate = curve.samples[k - 1].rate;
      ++curve.monotone_repairs;
    }
  }
  for (std::size_t k = 2; k < curve.samples.size(); ++k) {
    const auto& a = curve.samples[k - 2];
    const auto& b = curve.samples[k - 1];
    const auto& c = curve.samples[k];
    const double da = a.sigma * a.sigma;
    const double db = b.sigma * b.sigma;
    const double dc = c.sigma * c.sigma;
    const double chord = a.rate + (c.rate - a.rate) * (db - da) / (dc - da);
    curve.max_convexity_violation = std::max(curve.max_convexity_violation, b.rate - chord);
  }
  curve.convex_ok = curve.max_convexity_violation <= 1e-6;
  return curve;
}

RdIntegral rd_integral_report(const RdCurve& curve) {
  RdIntegral out;
  if (curve.sigma_m == 0.0 || curve.samples.empty()) return out;
  const GaussRule& rule = gauss_legendre(16);
  out.head = curve.samples.front().sigma * std::sqrt(curve.entropy);
  for (std::size_t k = 1; k < curve.samples.size(); ++k) {
    const double s1 = curve.samples[k - 1].sigma;
    const double s2 = std::min(curve.samples[k].sigma, curve.sigma_m);
    if (s1 >= curve.sigma_m) break;
    const RdSample& a = curve.samples[k - 1];
    const RdSample& b = curve.samples[k];
    const double d1 = s1 * s1;
    const double dd = b.sigma * b.sigma - d1;
    const bool hermite = std::isfinite(a.slope) && std::isfinite(b.slope);
    auto rate_at = [&](double sigma) {
      const double x = (sigma * sigma - d1) / dd;
      if (!hermite) return a.rate + (b.rate - a.rate) * x;
      const double x2 = x * x;
      const double x3 = x2 * x;
      return (2 * x3 - 3 * x2 + 1) * a.rate + (x3 - 2 * x2 + x) * dd * (-a.slope) + (-2 * x3 + 3 * x2) * b.rate +
             (x3 - x2) * dd * (-b.slope);
    };
    const double width = s2 - s1;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const double sigma = s2 - width * t * t;
      acc += rule.weights[i] * std::sqrt(std::max(rate_at(sigma), 0.0)) * 2.0 * width * t;
    }
    out.body += acc;
  }
  out.value = out.head + out.body;
  return out;
}

double rd_integral(const RdCurve& curve) { return rd_integral_report(curve).value; }

std::vector<double> default_alpha_grid(const DiscreteDistribution& mu, double tolerance, std::size_t per_decade) {
  RdSolver solver(mu);
  const double sm2 = solver.zero_rate_distortion();
  if (sm2 == 0.0) return {};
  const double sm = std::sqrt(sm2);
  const double s_c = solver.critical_slope();
  double alpha_max = sm2 / tolerance;
  // Past 1/sqrt(s_c) the rate is zero and the tail integral is exact.
  if (s_c > 0.0) alpha_max = std::max(alpha_max, 1.5 / std::sqrt(s_c));
  const double alpha_min = sm * 1e-4;
  const double decades = std::log10(alpha_max / alpha_min);
  const auto count = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade))) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = alpha_min * std::pow(alpha_max / alpha_min, static_cast<double>(i) / static_cast<double>(count - 1));
  grid.back() = alpha_max;
  return grid;
}

PenalizedIntegral penalized_rd_integral_report(const DiscreteDistribution& mu, std::vector<double> alpha_grid,
                                               double tolerance) {
  if (!(tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  PenalizedIntegral out;
  RdSolver solver(mu);
  const double sm2 = solver.zero_rate_distortion();
  if (sm2 == 0.0) return out;
  if (alpha_grid.empty()) alpha_grid = default_alpha_grid(mu, tolerance);
  if (alpha_grid.size() < 2) fail(ErrorKind::InvalidArgument, "alpha grid needs at least two points");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0)) fail(ErrorKind::InvalidArgument, "alpha grid must be positive");
    if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
      fail(ErrorKind::InvalidArgument, "alpha grid must be strictly increasing");
  }
  const double alpha_max = alpha_grid.back();
  out.tail = sm2 / alpha_max;
  if (out.tail > tolerance)
    fail(ErrorKind::GridTooNarrow, "tail bound sigma_m^2/alpha_max = " + std::to_string(out.tail) +
                                       " exceeds tolerance " + std::to_string(tolerance));

  const double inner_tol = std::min(1e-7, tolerance * 1e-3);
  std::vector<double> f(alpha_grid.size());
  for (std::size_t k = alpha_grid.size(); k-- > 0;) {
    const double a = alpha_grid[k];
    f[k] = solver.solve_slope(1.0 / (a * a), inner_tol).objective;
    ++out.solves;
  }
  // Trapezoid in ln(alpha) on alpha * F(alpha).
  double body = 0.0;
  for (std::size_t k = 1; k < alpha_grid.size(); ++k) {
    const double h = std::log(alpha_grid[k] / alpha_grid[k - 1]);
    body += 0.5 * h * (alpha_grid[k] * f[k] + alpha_grid[k - 1] * f[k - 1]);
  }
  out.head = alpha_grid.front() * f.front();
  out.value = out.head + body + out.tail;
  return out;
}

double penalized_rd_integral(const DiscreteDistribution& mu, std::vector<double> alpha_grid, double tolerance) {
  return penalized_rd_integral_report(mu, std::move(alpha_grid), tolerance).value;
}

double gaussian_rd(double sigma_m_sq, double sigma_sq) {
  if (!(sigma_m_sq > 0.0) || !(sigma_sq > 0.0)) fail(ErrorKind::InvalidArgument, "arguments must be positive");
  return std::max(0.0, 0.5 * std::log(sigma_m_sq / sigma_sq));
}

void write_curve_csv(std::ostream& out, const RdCurve& curve) {
  out << "sigma,rate_nats\n";
  for (const auto& s : curve.samples) write_csv_row(out, {format_double(s.sigma), format_double(s.rate)});
}

}  // namespace rdchain
