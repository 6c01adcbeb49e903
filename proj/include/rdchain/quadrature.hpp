#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rdchain {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Cached per n.
const GaussRule& gauss_legendre(std::size_t n);

/// Golden-section search for the maximizer of a unimodal f on [a, b].
struct Maximum {
  double x = 0.0;
  double value = 0.0;
};
Maximum golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace rdchain
