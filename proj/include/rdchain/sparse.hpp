#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdchain/ellipsoid.hpp"
#include "rdchain/noise.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

/// Weak l_q ball of radius r in R^d: sorted magnitudes satisfy |x|_(k) <= r k^{-1/q}.
struct WeakLqSpec {
  double q = 0.5;
  double r = 1.0;
  std::size_t d = 1;

  WeakLqSpec(double q, double r, std::size_t d);
  double R() const;  // r^q
  double cap(std::size_t k) const;  // r k^{-1/q}, k >= 1
  bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
};

/// sup_t t^q #{i : |x_i| > t} to the power 1/q, i.e. max_k k^{1/q} |x|_(k).
double weak_lq_radius(const Eigen::VectorXd& x, double q);

/// Rank clipping: the k-th largest magnitude is clipped at r k^{-1/q}.
Eigen::VectorXd project_weak_lq(const Eigen::VectorXd& x, const WeakLqSpec& spec);

struct SparseDesign {
  enum class Kind { OrthogonalIdentity, RandomUnitColumns } kind = Kind::OrthogonalIdentity;
  Eigen::MatrixXd X;  // n x d, empty for the orthogonal design

  static SparseDesign orthogonal() { return {}; }
  /// Gaussian entries, columns rescaled to norm sqrt(n).
  static SparseDesign random_unit_columns(std::size_t n, std::size_t d, RngStream& rng);
  /// Validates that every column of X / sqrt(n) has unit norm (1e-9).
  static SparseDesign custom(Eigen::MatrixXd X);
};

SparseDesign::Kind parse_design_kind(const std::string& name);

/// Named truths: "zero", "half" (half of every cap), "boundaryK" (first K caps).
Eigen::VectorXd sparse_truth(const WeakLqSpec& spec, const std::string& kind);

/// Y = X beta* + w. The orthogonal design is handled through its sufficient
/// statistic X^T Y / n = beta* + X^T w / n, exact; other designs use projected
/// gradient with 20 starts and are flagged heuristic. squared_error is the
/// prediction error (1/n) ||X (beta_hat - beta*)||^2.
ErmTrial erm_sparse_trial(const SparseDesign& design, const Eigen::VectorXd& beta_star, const WeakLqSpec& spec,
                          std::size_t n, NoiseKind noise, RngStream& rng);

struct QuantizerResult {
  Eigen::MatrixXd U;          // same shape as the samples
  double mean_abs_gap = 0.0;  // empirical E ||U - Z||_1
  double gap_se = 0.0;
  double entropy = 0.0;       // plug-in entropy of the empirical law of U, nats
  std::vector<double> coordinate_radius;  // empirical r_j
};

/// Coordinatewise grid quantizer. Coordinate j gets budget b_j proportional to
/// r_j^q, where r_j is the empirical weak radius of Z_j, and grid step
/// r_j ((1-q)/(2-q) b_j / r_j)^{1/(1-q)}; U_j is the grid point nearest Z_j
/// with |U_j| <= |Z_j|. Rows of z_samples are samples.
QuantizerResult quantize_weak_lq(const Eigen::MatrixXd& z_samples, double q, double r, double b);

/// Grid step for one coordinate of weak radius r and budget b.
double quantizer_step(double q, double r, double b);

/// Samples of a law supported in wB_q(r): random signs and a random permutation
/// of the caps, each scaled by an independent uniform.
Eigen::MatrixXd sample_weak_lq(const WeakLqSpec& spec, std::size_t count, RngStream& rng);

/// x sqrt(ln 1/x) below 1/e, 1/e above.
double f_func(double x);

struct EnvelopePoints {
  double a1 = 0.0;
  double a2 = 0.0;
  double slope = 0.0;  // of the linear middle piece
};
/// Tangency points of the concave envelope of max(x ln(1/x), ln x).
const EnvelopePoints& envelope_points();
double g_env(double x);

/// (r/eps)^{2q/(2-q)} ln d, d above the threshold (default 2).
double sparse_rd_bound(double q, double r, double eps, double d, double d_threshold = 2.0);

/// sqrt(ln d) r^{q/(2-q)} E^{(1-q)/(2-q)}
double sparse_width_moment_G(double q, double r, double d, double E);

}  // namespace rdchain
