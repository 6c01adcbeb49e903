#pragma once

namespace rdchain {

struct ConstantResult {
  double value = 0.0;
  double argmax = 0.0;
};

/// (4 - 5 tau) / (2 sqrt(2) (4 - tau) ln(4 / tau)).
double lower_constant_objective(double tau);
/// Maximum over tau in (0, 4/5) of lower_constant_objective: c and tau*.
ConstantResult lower_constant();

/// sqrt(1 - a^-2) / (2a / c + sqrt(2 pi h(a^-2))), h the binary entropy in nats.
double majorizing_objective(double a, double c);
/// Maximum over a in (1, 10]: c-bar and a*.
ConstantResult majorizing_constant();

}  // namespace rdchain
