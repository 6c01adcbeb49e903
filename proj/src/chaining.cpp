#include "rdchain/chaining.hpp"

#include <algorithm>
#include <limits>

#include "rdchain/covering.hpp"
#include "rdchain/error.hpp"

namespace rdchain {

double dudley_integral(const FiniteMetricSpace& space, double constant_k) {
  if (!(constant_k > 0.0)) fail(ErrorKind::InvalidArgument, "constant must be positive");
  std::vector<double> cuts = space.breakpoints();
  if (cuts.empty()) return 0.0;
  // N(T, .) is constant on [cuts[k-1], cuts[k]) with cuts[-1] = 0.
  double sum = 0.0;
  double left = 0.0;
  for (const double right : cuts) {
    const auto count = covering_number(space, left).count;
    sum += (right - left) * sqrt_log_plus(static_cast<double>(count));
    left = right;
  }
  return constant_k * sum;
}

namespace {

struct BallProfile {
  std::vector<double> radii;  // distinct distances from t to support points, ascending
  std::vector<std::vector<std::size_t>> entering;  // support points entering at each radius
};

BallProfile profile(const DiscreteDistribution& mu, std::size_t t) {
  std::vector<std::pair<double, std::size_t>> ds;
  for (std::size_t z = 0; z < mu.size(); ++z)
    if (mu[z] > 0.0) ds.emplace_back(mu.space().dist(t, z), z);
  std::sort(ds.begin(), ds.end());
  BallProfile p;
  for (const auto& [d, z] : ds) {
    if (p.radii.empty() || d > p.radii.back()) {
      p.radii.push_back(d);
      p.entering.emplace_back();
    }
    p.entering.back().push_back(z);
  }
  return p;
}

double functional_from_weights(const FiniteMetricSpace& space, const std::vector<double>& w, std::size_t t,
                               std::vector<double>* grad) {
  std::vector<std::pair<double, std::size_t>> ds;
  for (std::size_t z = 0; z < w.size(); ++z)
    if (w[z] > 0.0) ds.emplace_back(space.dist(t, z), z);
  std::sort(ds.begin(), ds.end());
  if (ds.empty() || ds.front().first > 0.0) return std::numeric_limits<double>::infinity();
  const double diam = space.diam();
  double value = 0.0;
  double mass = 0.0;
  std::vector<std::size_t> inside;
  std::size_t k = 0;
  while (k < ds.size()) {
    const double r = ds[k].first;
    while (k < ds.size() && ds[k].first == r) {
      mass += w[ds[k].second];
      inside.push_back(ds[k].second);
      ++k;
    }
    const double next = k < ds.size() ? ds[k].first : diam;
    const double len = std::max(0.0, std::min(next, diam) - r);
    if (len == 0.0 || mass >= 1.0) continue;
    const double lg = -std::log(mass);
    value += len * std::sqrt(lg);
    if (grad && lg > 1e-14) {
      const double g = -len / (2.0 * mass * std::sqrt(lg));
      for (const std::size_t z : inside) (*grad)[z] += g;
    }
  }
  return value;
}

}  // namespace

double ball_mass_functional(const DiscreteDistribution& mu, std::size_t t) {
  if (t >= mu.size()) fail(ErrorKind::UnknownPoint, "point index out of range");
  const BallProfile p = profile(mu, t);
  if (p.radii.empty() || p.radii.front() > 0.0) return std::numeric_limits<double>::infinity();
  const double diam = mu.space().diam();
  double value = 0.0;
  double mass = 0.0;
  for (std::size_t k = 0; k < p.radii.size(); ++k) {
    for (const std::size_t z : p.entering[k]) mass += mu[z];
    const double next = k + 1 < p.radii.size() ? p.radii[k + 1] : diam;
    const double len = std::max(0.0, std::min(next, diam) - p.radii[k]);
    if (len > 0.0 && mass < 1.0) value += len * std::sqrt(-std::log(mass));
  }
  return value;
}

ChainingFunctionals gamma2_search(const FiniteMetricSpace& space, std::size_t iterations, RngStream& rng,
                                  std::size_t restarts) {
  const std::size_t n = space.size();
  ChainingFunctionals out;
  out.dudley_value = dudley_integral(space, 1.0);
  out.measure_used.assign(n, 1.0 / static_cast<double>(n));
  out.delta_measure = out.measure_used;
  if (n == 1) return out;

  // sign = +1: minimize sup_t I_w(t). sign = -1: maximize inf_t I_w(t).
  auto objective = [&](const std::vector<double>& w, int sign, std::vector<double>* grad) {
    double best = sign > 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (w[t] <= 0.0 && sign < 0) continue;
      const double v = functional_from_weights(space, w, t, nullptr);
      if ((sign > 0 && v > best) || (sign < 0 && v < best)) {
        best = v;
        arg = t;
      }
    }
    ++out.evaluations;
    if (grad) {
      std::fill(grad->begin(), grad->end(), 0.0);
      functional_from_weights(space, w, arg, grad);
    }
    return best;
  };

  auto search = [&](int sign, std::vector<double>& incumbent) {
    double best = objective(incumbent, sign, nullptr);
    for (std::size_t r = 0; r <= restarts; ++r) {
      std::vector<double> w(n);
      if (r == 0) {
        w.assign(n, 1.0 / static_cast<double>(n));
      } else {
        double total = 0.0;
        for (auto& x : w) {
          x = -std::log(rng.uniform_open());
          total += x;
        }
        for (auto& x : w) x /= total;
      }
      std::vector<double> grad(n);
      for (std::size_t it = 0; it < iterations; ++it) {
        const double value = objective(w, sign, &grad);
        if ((sign > 0 && value < best) || (sign < 0 && value > best)) {
          best = value;
          incumbent = w;
        }
        const double gmax = std::max(1e-300, std::abs(*std::max_element(grad.begin(), grad.end(), [](double a, double b) {
          return std::abs(a) < std::abs(b);
        })));
        const double eta = 0.5 / (gmax * std::sqrt(1.0 + static_cast<double>(it)));
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          w[i] *= std::exp(-sign * eta * grad[i]);
          w[i] = std::max(w[i], 1e-300);
          total += w[i];
        }
        for (auto& x : w) x /= total;
      }
      const double value = objective(w, sign, nullptr);
      if ((sign > 0 && value < best) || (sign < 0 && value > best)) {
        best = value;
        incumbent = w;
      }
    }
    return best;
  };

  out.gamma2_upper = search(+1, out.measure_used);
  out.delta2_lower = search(-1, out.delta_measure);
  return out;
}

}  // namespace rdchain
