#include "rdchain/noise.hpp"

#include <cmath>
#include <random>

#include "rdchain/error.hpp"

namespace rdchain {

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "rademacher_scaled") return NoiseKind::RademacherScaled;
  if (name == "uniform_scaled") return NoiseKind::UniformScaled;
  fail(ErrorKind::InvalidArgument, "unknown noise kind '" + std::string(name) + "'");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::RademacherScaled: return "rademacher_scaled";
    case NoiseKind::UniformScaled: return "uniform_scaled";
  }
  return "gaussian";
}

double draw_noise(NoiseKind kind, RngStream& rng) {
  switch (kind) {
    case NoiseKind::Gaussian: return rng.normal();
    case NoiseKind::RademacherScaled: return rng.rademacher();
    case NoiseKind::UniformScaled: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
  }
  return 0.0;
}

double draw_noise_mean(NoiseKind kind, std::size_t n, RngStream& rng) {
  const double dn = static_cast<double>(n);
  switch (kind) {
    case NoiseKind::Gaussian: return rng.normal() / std::sqrt(dn);
    case NoiseKind::RademacherScaled: {
      std::binomial_distribution<long long> heads(static_cast<long long>(n), 0.5);
      return (2.0 * static_cast<double>(heads(rng)) - dn) / dn;
    }
    case NoiseKind::UniformScaled: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += draw_noise(kind, rng);
      return s / dn;
    }
  }
  return 0.0;
}

}  // namespace rdchain
