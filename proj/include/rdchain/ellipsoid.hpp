#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "rdchain/noise.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

/// { t : sum t_i^2 / a_i^2 <= 1 } in R^D.
struct EllipsoidSpec {
  Eigen::VectorXd axes;
  std::optional<double> beta;  // set when axes are i^-beta

  explicit EllipsoidSpec(Eigen::VectorXd semi_axes, std::optional<double> sobolev_beta = std::nullopt);
  std::size_t dim() const { return static_cast<std::size_t>(axes.size()); }
  /// sum t_i^2 / a_i^2
  double gauge_sq(const Eigen::VectorXd& t) const;
  bool contains(const Eigen::VectorXd& t, double tol = 1e-12) const { return gauge_sq(t) <= 1.0 + tol; }
};

EllipsoidSpec sobolev_ellipsoid(double beta, std::size_t D);

struct EllipsoidProjection {
  Eigen::VectorXd point;
  double multiplier = 0.0;     // lambda, 0 when x is inside
  double kkt_residual = 0.0;
  int iterations = 0;
};

EllipsoidProjection project_ellipsoid_report(const Eigen::VectorXd& x, const EllipsoidSpec& E, double tol = 1e-12);
Eigen::VectorXd project_ellipsoid(const Eigen::VectorXd& x, const EllipsoidSpec& E, double tol = 1e-12);

struct EllipsoidWidths {
  double sharp_width = 0.0;  // sqrt(sum a_i^2)
  double dudley_sum = 0.0;   // sum over 2^i <= D of 2^{i/2} a_{2^i}
  double tail_sq = 0.0;      // sum_{i>D} a_i^2 for Sobolev specs, else 0
};

EllipsoidWidths ellipsoid_widths(const EllipsoidSpec& E);
/// sqrt(5 sum min(a_i^2, eps))
double localized_width(const EllipsoidSpec& E, double eps);

/// D -> infinity limits for a_i = i^-beta, computed by summation with an
/// Euler-Maclaurin tail.
double sobolev_sharp_width_limit(double beta);
double sobolev_dudley_sum_limit(double beta);
/// sum_{i>D} i^{-2 beta}
double sobolev_tail_sq(double beta, std::size_t D);

struct CBeta {
  double c = 0.0;
  double C = 0.0;  // 4c + 1
};
CBeta c_beta(double beta);

/// C_beta E^{(2 beta - 1)/(4 beta)}
double width_moment_G(double beta, double E);

/// Coordinatewise map applied to the ellipsoid.
struct LipschitzMap {
  enum class Kind { Identity, SoftClip } kind = Kind::Identity;
  double kappa = 1.0;  // soft clip: kappa * tanh(t / kappa)

  static LipschitzMap identity() { return {}; }
  static LipschitzMap soft_clip(double kappa);
  double apply(double t) const;
  double derivative(double t) const;
  double inverse(double y) const;  // y in the range
  bool in_range(double y) const;
  std::string name() const;
};

struct ErmTrial {
  std::size_t n = 0;
  Eigen::VectorXd estimate;
  double squared_error = 0.0;
  /// 2 <m_hat - m, noise mean>, the right side of the basic ERM inequality.
  double generalization_term = 0.0;
  std::uint64_t seed = 0;
  bool heuristic = false;
};

/// X_i = m + noise, m_hat = argmin over phi(E) of the empirical squared loss.
/// Identity map: exact projection of the sample mean. Soft clip: projected
/// gradient on the ellipsoid parameter with 20 starts (heuristic).
ErmTrial erm_mean_trial(const EllipsoidSpec& E, const LipschitzMap& map, const Eigen::VectorXd& m, std::size_t n,
                        NoiseKind noise, RngStream& rng);

/// Same with the noise mean supplied, for tests and oracles.
ErmTrial erm_mean_from_noise(const EllipsoidSpec& E, const LipschitzMap& map, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& noise_mean, std::size_t n);

/// Named truths inside a Sobolev ellipsoid: "zero" or "half"
/// (m_i = a_i / (2 i sqrt(zeta(2))), gauge 1/2 or less).
Eigen::VectorXd ellipsoid_truth(const EllipsoidSpec& E, const std::string& kind);

/// ceil(n^{1/(2 beta + 1)}) * 32
std::size_t default_truncation(double beta, std::size_t n);

}  // namespace rdchain
