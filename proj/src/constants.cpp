#include "rdchain/constants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "rdchain/info.hpp"
#include "rdchain/quadrature.hpp"

namespace rdchain {

namespace {

// Golden search pins the argmax only to about sqrt(eps); polish it on the sign
// of a central difference, which stays informative much closer to the peak.
Maximum polish(const std::function<double(double)>& f, Maximum m, double lo, double hi) {
  constexpr double h = 1e-5;
  double a = std::max(lo + h, m.x - 1e-6);
  double b = std::min(hi - h, m.x + 1e-6);
  auto rising = [&](double x) { return f(x + h) > f(x - h); };
  if (!rising(a) || rising(b)) return m;
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    const double mid = 0.5 * (a + b);
    (rising(mid) ? a : b) = mid;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace

double lower_constant_objective(double tau) {
  return (4.0 - 5.0 * tau) / (2.0 * std::numbers::sqrt2 * (4.0 - tau) * std::log(4.0 / tau));
}

ConstantResult lower_constant() {
  const Maximum m = polish(lower_constant_objective, golden_max(lower_constant_objective, 1e-9, 0.8 - 1e-9, 1e-12), 1e-9, 0.8);
  return {m.value, m.x};
}

double majorizing_objective(double a, double c) {
  const double x = 1.0 / (a * a);
  return std::sqrt(1.0 - x) / (2.0 * a / c + std::sqrt(2.0 * std::numbers::pi * binary_entropy(x)));
}

ConstantResult majorizing_constant() {
  const double c = lower_constant().value;
  const std::function<double(double)> f = [c](double a) { return majorizing_objective(a, c); };
  const Maximum m = polish(f, golden_max(f, 1.0 + 1e-12, 10.0, 1e-12), 1.0, 10.0);
  return {m.value, m.x};
}

}  // namespace rdchain
