#include "rdchain/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rdchain/error.hpp"

namespace rdchain {

EllipsoidSpec::EllipsoidSpec(Eigen::VectorXd semi_axes, std::optional<double> sobolev_beta)
    : axes(std::move(semi_axes)), beta(sobolev_beta) {
  if (axes.size() == 0) fail(ErrorKind::InvalidArgument, "ellipsoid needs at least one axis");
  for (Eigen::Index i = 0; i < axes.size(); ++i) {
    if (!(axes(i) > 0.0) || !std::isfinite(axes(i))) fail(ErrorKind::InvalidArgument, "semi-axes must be positive");
    if (i > 0 && axes(i) > axes(i - 1)) fail(ErrorKind::InvalidArgument, "semi-axes must be nonincreasing");
  }
}

double EllipsoidSpec::gauge_sq(const Eigen::VectorXd& t) const {
  if (t.size() != axes.size()) fail(ErrorKind::InvalidArgument, "dimension mismatch");
  return (t.array() / axes.array()).square().sum();
}

EllipsoidSpec sobolev_ellipsoid(double beta, std::size_t D) {
  if (!(beta > 0.5)) fail(ErrorKind::UnsupportedBeta, "Sobolev ellipsoids need beta > 1/2");
  if (D == 0) fail(ErrorKind::InvalidArgument, "D must be positive");
  Eigen::VectorXd a(static_cast<Eigen::Index>(D));
  for (std::size_t i = 0; i < D; ++i) a(static_cast<Eigen::Index>(i)) = std::pow(static_cast<double>(i + 1), -beta);
  return EllipsoidSpec(std::move(a), beta);
}

EllipsoidProjection project_ellipsoid_report(const Eigen::VectorXd& x, const EllipsoidSpec& E, double tol) {
  if (!x.allFinite()) fail(ErrorKind::InvalidArgument, "x must be finite");
  EllipsoidProjection out;
  const Eigen::ArrayXd a2 = E.axes.array().square();
  const Eigen::ArrayXd xa2 = x.array().square() * a2;
  if (E.gauge_sq(x) <= 1.0) {
    out.point = x;
    return out;
  }
  // S(lambda) = sum x^2 a^2 / (a^2 + lambda)^2 is decreasing and convex; Newton on
  // 1/sqrt(S) - 1, which is close to linear, with a bisection safeguard.
  auto S = [&](double l) { return (xa2 / (a2 + l).square()).sum(); };
  auto dS = [&](double l) { return -2.0 * (xa2 / (a2 + l).cube()).sum(); };
  double lo = 0.0;
  double hi = std::sqrt(xa2.sum());
  double l = 0.0;
  for (int it = 0; it < 200; ++it) {
    out.iterations = it + 1;
    const double s = S(l);
    if (s > 1.0) lo = l; else hi = l;
    if (std::abs(s - 1.0) <= tol * 1e-3 || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
    const double h = 1.0 / std::sqrt(s) - 1.0;
    const double dh = -0.5 * std::pow(s, -1.5) * dS(l);
    double next = l - h / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    l = next;
  }
  out.multiplier = l;
  out.point = (x.array() * a2 / (a2 + l)).matrix();
  const double stationarity = ((out.point - x).array() * a2 + l * out.point.array()).abs().maxCoeff() /
                              std::max(1.0, (x.array() * a2).abs().maxCoeff());
  out.kkt_residual = std::max(std::abs(E.gauge_sq(out.point) - 1.0), stationarity);
  return out;
}

Eigen::VectorXd project_ellipsoid(const Eigen::VectorXd& x, const EllipsoidSpec& E, double tol) {
  return project_ellipsoid_report(x, E, tol).point;
}

namespace {

// sum_{i >= N} i^-s for s > 1 by Euler-Maclaurin, after summing directly up to 1000.
double zeta_tail(double s, std::size_t N) {
  double sum = 0.0;
  std::size_t i = std::max<std::size_t>(N, 1);
  for (; i < 1000; ++i) sum += std::pow(static_cast<double>(i), -s);
  const double M = static_cast<double>(i);
  sum += std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s) + s * std::pow(M, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(M, -s - 3.0) / 720.0;
  return sum;
}

}  // namespace

EllipsoidWidths ellipsoid_widths(const EllipsoidSpec& E) {
  EllipsoidWidths w;
  w.sharp_width = std::sqrt(E.axes.squaredNorm());
  for (std::size_t k = 1; k <= E.dim(); k *= 2) w.dudley_sum += std::sqrt(static_cast<double>(k)) * E.axes(static_cast<Eigen::Index>(k - 1));
  if (E.beta) w.tail_sq = sobolev_tail_sq(*E.beta, E.dim());
  return w;
}

double localized_width(const EllipsoidSpec& E, double eps) {
  return std::sqrt(5.0 * E.axes.array().square().min(eps).sum());
}

double sobolev_tail_sq(double beta, std::size_t D) { return zeta_tail(2.0 * beta, D + 1); }

double sobolev_sharp_width_limit(double beta) {
  if (!(beta > 0.5)) fail(ErrorKind::UnsupportedBeta, "the limit needs beta > 1/2");
  return std::sqrt(zeta_tail(2.0 * beta, 1));
}

double sobolev_dudley_sum_limit(double beta) {
  if (!(beta > 0.5)) fail(ErrorKind::UnsupportedBeta, "the limit needs beta > 1/2");
  // Terms 2^{i/2} (2^i)^-beta; sum until negligible, then close the geometric tail.
  const double ratio = std::pow(2.0, 0.5 - beta);
  double term = 1.0;
  double sum = 0.0;
  for (int i = 0; i < 100000 && term > 1e-18 * sum; ++i) {
    sum += term;
    term *= ratio;
  }
  return sum + term / (1.0 - ratio);
}

CBeta c_beta(double beta) {
  if (!(beta > 0.5)) fail(ErrorKind::UnsupportedBeta, "c_beta needs beta > 1/2");
  const double k = 2.0 * beta - 1.0;
  CBeta out;
  out.c = ((1.0 + beta) / 2.0 + 1.0 / (2.0 * k)) * std::pow(beta / (4.0 * k), -1.0 / (1.0 + 2.0 * beta));
  out.C = 4.0 * out.c + 1.0;
  return out;
}

double width_moment_G(double beta, double E) {
  if (E < 0.0) fail(ErrorKind::InvalidArgument, "E must be nonnegative");
  if (E == 0.0) {
    c_beta(beta);
    return 0.0;
  }
  return c_beta(beta).C * std::pow(E, (2.0 * beta - 1.0) / (4.0 * beta));
}

LipschitzMap LipschitzMap::soft_clip(double kappa) {
  if (!(kappa > 0.0) || kappa > 1.0) fail(ErrorKind::InvalidArgument, "soft clip needs 0 < kappa <= 1");
  return {Kind::SoftClip, kappa};
}

double LipschitzMap::apply(double t) const { return kind == Kind::Identity ? t : kappa * std::tanh(t / kappa); }

double LipschitzMap::derivative(double t) const {
  if (kind == Kind::Identity) return 1.0;
  const double th = std::tanh(t / kappa);
  return 1.0 - th * th;
}

double LipschitzMap::inverse(double y) const { return kind == Kind::Identity ? y : kappa * std::atanh(y / kappa); }

bool LipschitzMap::in_range(double y) const { return kind == Kind::Identity || std::abs(y) < kappa; }

std::string LipschitzMap::name() const { return kind == Kind::Identity ? "identity" : "soft_clip"; }

namespace {

Eigen::VectorXd map_vec(const LipschitzMap& map, const Eigen::VectorXd& t) {
  return t.unaryExpr([&](double v) { return map.apply(v); });
}

// Projected gradient on theta for ||y - phi(theta)||^2 over E, from one start.
Eigen::VectorXd descend(const EllipsoidSpec& E, const LipschitzMap& map, const Eigen::VectorXd& y, Eigen::VectorXd theta,
                        double& value) {
  auto objective = [&](const Eigen::VectorXd& th) { return (y - map_vec(map, th)).squaredNorm(); };
  value = objective(theta);
  double step = 0.5;
  for (int it = 0; it < 5000; ++it) {
    const Eigen::VectorXd phi = map_vec(map, theta);
    const Eigen::VectorXd grad =
        -2.0 * ((y - phi).array() * theta.unaryExpr([&](double v) { return map.derivative(v); }).array()).matrix();
    double next_value = value;
    Eigen::VectorXd next;
    for (int bt = 0; bt < 60; ++bt) {
      next = project_ellipsoid(theta - step * grad, E);
      next_value = objective(next);
      const Eigen::VectorXd delta = next - theta;
      if (next_value <= value + grad.dot(delta) + 0.5 / step * delta.squaredNorm()) break;
      step *= 0.5;
    }
    if (next_value > value) break;
    const double change = value - next_value;
    theta = std::move(next);
    value = next_value;
    step = std::min(1.0, step * 2.0);
    if (change <= 1e-9 * std::max(value, 1e-300)) break;
  }
  return theta;
}

}  // namespace

ErmTrial erm_mean_from_noise(const EllipsoidSpec& E, const LipschitzMap& map, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& noise_mean, std::size_t n) {
  if (m.size() != E.axes.size() || noise_mean.size() != m.size())
    fail(ErrorKind::InvalidArgument, "dimension mismatch");
  Eigen::VectorXd theta_m(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!map.in_range(m(i))) fail(ErrorKind::InvalidTruth, "truth is outside the range of the map");
    theta_m(i) = map.inverse(m(i));
  }
  if (!E.contains(theta_m, 1e-9)) fail(ErrorKind::InvalidTruth, "truth is not in the ellipsoid image");

  ErmTrial trial;
  trial.n = n;
  const Eigen::VectorXd y = m + noise_mean;
  if (map.kind == LipschitzMap::Kind::Identity) {
    trial.estimate = project_ellipsoid(y, E);
  } else {
    trial.heuristic = true;
    // Starts: pulled-back clamp of y, the origin, and random points of E drawn
    // from a stream tied to y so the trial stays deterministic.
    Eigen::VectorXd pulled(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
      pulled(i) = map.inverse(std::clamp(y(i), -map.kappa * (1 - 1e-12), map.kappa * (1 - 1e-12)));
    std::vector<Eigen::VectorXd> starts{project_ellipsoid(pulled, E), Eigen::VectorXd::Zero(y.size())};
    RngStream rng(fnv1a64(std::string_view(reinterpret_cast<const char*>(y.data()), sizeof(double) * y.size())), 17);
    while (starts.size() < 20) {
      Eigen::VectorXd g(y.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal() * E.axes(i);
      starts.push_back(g * (rng.uniform() / std::sqrt(E.gauge_sq(g))));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
      double value = 0.0;
      Eigen::VectorXd th = descend(E, map, y, s, value);
      if (value < best) {
        best = value;
        trial.estimate = map_vec(map, th);
      }
    }
  }
  trial.squared_error = (trial.estimate - m).squaredNorm();
  trial.generalization_term = 2.0 * (trial.estimate - m).dot(noise_mean);
  return trial;
}

ErmTrial erm_mean_trial(const EllipsoidSpec& E, const LipschitzMap& map, const Eigen::VectorXd& m, std::size_t n,
                        NoiseKind noise, RngStream& rng) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  Eigen::VectorXd noise_mean(m.size());
  for (Eigen::Index i = 0; i < noise_mean.size(); ++i) noise_mean(i) = draw_noise_mean(noise, n, rng);
  ErmTrial t = erm_mean_from_noise(E, map, m, noise_mean, n);
  t.seed = rng.seed();
  return t;
}

Eigen::VectorXd ellipsoid_truth(const EllipsoidSpec& E, const std::string& kind) {
  const Eigen::Index D = E.axes.size();
  if (kind == "zero") return Eigen::VectorXd::Zero(D);
  if (kind == "half") {
    Eigen::VectorXd m(D);
    const double z2 = std::sqrt(std::numbers::pi * std::numbers::pi / 6.0);
    for (Eigen::Index i = 0; i < D; ++i) m(i) = 0.5 * E.axes(i) / (static_cast<double>(i + 1) * z2);
    return m;
  }
  fail(ErrorKind::InvalidTruth, "unknown truth '" + kind + "'");
}

std::size_t default_truncation(double beta, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / (2.0 * beta + 1.0)))) * 32;
}

}  // namespace rdchain
