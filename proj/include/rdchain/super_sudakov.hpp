#pragma once

#include <cstddef>
#include <vector>

#include "rdchain/linear_process.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

struct SuperSudakovReport {
  double radius = 0.0;
  std::vector<std::size_t> packing;  // maximal radius-separated subset
  bool packing_exact = true;
  double sup_mean = 0.0;             // E sup_T X
  double sup_se = 0.0;
  std::size_t min_ball_center = 0;   // s minimizing E sup over T_s
  double min_ball_mean = 0.0;
  double min_ball_se = 0.0;
  double sudakov_term = 0.0;         // (radius/4) sqrt(2 ln |packing|)
  double slack = 0.0;
  double slack_se = 0.0;             // paired difference, same draws
  std::size_t samples = 0;
  bool pass(double k_se = 3.0) const { return slack >= -k_se * slack_se; }
};

/// E sup_T X >= (eps/4) sqrt(2 ln |N|) + min_{s in N} E sup_{d(t,s) <= eps/4} X
/// for a maximal eps-packing N, checked by Monte Carlo.
SuperSudakovReport super_sudakov_check(const LinearProcessSpec& process, double radius, std::size_t mc_samples,
                                       RngStream& rng, std::size_t threads = 0);

}  // namespace rdchain
