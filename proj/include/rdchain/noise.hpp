#pragma once

#include <string>
#include <string_view>

#include "rdchain/rng.hpp"

namespace rdchain {

/// Unit-variance noise laws. Scaled Rademacher is +-1, scaled uniform is
/// uniform on [-sqrt 3, sqrt 3].
enum class NoiseKind { Gaussian, RademacherScaled, UniformScaled };

NoiseKind parse_noise_kind(std::string_view name);
std::string to_string(NoiseKind kind);

double draw_noise(NoiseKind kind, RngStream& rng);

/// Mean of n i.i.d. draws, sampled exactly (Gaussian and Rademacher through
/// their sufficient statistics, uniform by summation).
double draw_noise_mean(NoiseKind kind, std::size_t n, RngStream& rng);

}  // namespace rdchain
