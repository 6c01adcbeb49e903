#include "rdchain/blahut_arimoto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdchain/error.hpp"
#include "rdchain/info.hpp"

namespace rdchain {

namespace {

Eigen::MatrixXd squared(const Eigen::MatrixXd& d) { return d.array().square().matrix(); }

}  // namespace

RdSolver::RdSolver(const DiscreteDistribution& mu)
    : RdSolver(mu.weights(), squared(mu.space().distances())) {}

RdSolver::RdSolver(std::vector<double> p, Eigen::MatrixXd distortion_sq) {
  if (static_cast<Eigen::Index>(p.size()) != distortion_sq.rows())
    fail(ErrorKind::InvalidArgument, "source weights and distortion rows differ");
  if (!distortion_sq.allFinite()) fail(ErrorKind::InvalidSpace, "non-finite distances");
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) {
      rows.push_back(static_cast<Eigen::Index>(i));
      p_.push_back(p[i]);
    }
  if (rows.empty()) fail(ErrorKind::InvalidDistribution, "empty support");
  const Eigen::Index m = distortion_sq.cols();
  d_.resize(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t r = 0; r < rows.size(); ++r) d_.row(static_cast<Eigen::Index>(r)) = distortion_sq.row(rows[r]);
  row_min_ = d_.rowwise().minCoeff();
  const Eigen::Map<const Eigen::VectorXd> pv(p_.data(), static_cast<Eigen::Index>(p_.size()));
  const Eigen::RowVectorXd column_cost = pv.transpose() * d_;
  zero_rate_distortion_ = column_cost.minCoeff(&zero_rate_letter_);
  entropy_ = entropy(p_);
  q_.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
}

void RdSolver::iterate(double s, double tolerance, SlopePoint& out) {
  const Eigen::Index n = d_.rows();
  const Eigen::Index m = d_.cols();
  // K(z,u) = exp(-s (d - min_u d)) keeps the best column of every row at 1.
  Eigen::MatrixXd k(n, m);
  for (Eigen::Index z = 0; z < n; ++z)
    for (Eigen::Index u = 0; u < m; ++u) {
      const double e = std::exp(-s * (d_(z, u) - row_min_(z)));
      k(z, u) = e < 1e-250 ? 0.0 : e;
    }

  // Light mixing with uniform so letters starved at another slope can recover.
  for (auto& x : q_) x = 0.999 * x + 0.001 / static_cast<double>(m);

  Eigen::VectorXd q = Eigen::Map<Eigen::VectorXd>(q_.data(), m);
  Eigen::VectorXd zsum(n);
  Eigen::VectorXd c(m);
  double shift = 0.0;
  for (Eigen::Index z = 0; z < n; ++z) shift += p_[static_cast<std::size_t>(z)] * s * row_min_(z);

  const Eigen::Map<const Eigen::VectorXd> p(p_.data(), n);
  Eigen::VectorXd ratio(n);
  std::vector<double> history;
  std::vector<Eigen::Index> bad_rows;
  history.reserve(256);
  double previous = std::numeric_limits<double>::infinity();
  out = SlopePoint{};
  out.slope = s;
  for (std::size_t it = 1;; ++it) {
    zsum.noalias() = k * q;
    double objective = shift;
    bad_rows.clear();
    for (Eigen::Index z = 0; z < n; ++z) {
      if (zsum(z) >= 1e-250) {
        ratio(z) = p(z) / zsum(z);
        objective -= p(z) * std::log(zsum(z));
      } else {
        ratio(z) = 0.0;
        bad_rows.push_back(z);
      }
    }
    c.noalias() = k.transpose() * ratio;
    for (const Eigen::Index z : bad_rows) {
      // Every letter with appreciable mass is far from z; normalize this row in
      // the log domain.
      double lmax = -std::numeric_limits<double>::infinity();
      for (Eigen::Index u = 0; u < m; ++u)
        if (q(u) > 0.0) lmax = std::max(lmax, std::log(q(u)) - s * (d_(z, u) - row_min_(z)));
      double acc = 0.0;
      for (Eigen::Index u = 0; u < m; ++u)
        if (q(u) > 0.0) acc += std::exp(std::log(q(u)) - s * (d_(z, u) - row_min_(z)) - lmax);
      const double log_z = lmax + std::log(acc);
      for (Eigen::Index u = 0; u < m; ++u) c(u) += p(z) * std::exp(-s * (d_(z, u) - row_min_(z)) - log_z);
      objective -= p(z) * log_z;
    }
    if (objective > previous + 1e-12 * std::max(1.0, std::abs(previous))) out.monotone = false;
    previous = objective;
    history.push_back(objective);

    // Convexity of the objective in q gives F* >= F(q) - ln max_u c(u).
    const double certified = std::max(0.0, std::log(c.maxCoeff()));
    // The certificate is loose when many letters nearly tie. For the O(1/t)
    // tail of the iteration the remaining error is about t times the recent
    // per-sweep decrease.
    double extrapolated = std::numeric_limits<double>::infinity();
    constexpr std::size_t window = 20;
    if (it > 2 * window) {
      const double drop = history[it - 1 - window] - objective;
      extrapolated = std::max(0.0, drop) * static_cast<double>(it) / static_cast<double>(window);
    }
    out.gap = std::min(certified, extrapolated);
    out.certified = certified < tolerance;
    out.objective = objective;
    out.iterations = it;
    // Below the critical slope the optimum is the zero-rate channel, which the
    // iteration approaches only like 1/t. Compare against it directly.
    const double zero_rate_objective = s * zero_rate_distortion_;
    if (zero_rate_objective - (objective - certified) < tolerance) {
      out.rate = 0.0;
      out.distortion_sq = zero_rate_distortion_;
      out.objective = zero_rate_objective;
      out.gap = std::max(0.0, zero_rate_objective - (objective - certified));
      out.certified = true;
      q.setZero();
      q(zero_rate_letter_) = 1.0;
      for (Eigen::Index u = 0; u < m; ++u) q_[static_cast<std::size_t>(u)] = q(u);
      last_slope_ = s;
      return;
    }
    if (out.gap < tolerance || it >= max_iterations) break;
    q = q.cwiseProduct(c);
    q /= q.sum();
    // Subnormal masses only cost time; the warm-start mixing revives letters.
    q = (q.array() < 1e-200).select(0.0, q);
  }

  // Channel Q(u|z) = q(u) K(z,u) / Z(z) and its output marginal r.
  Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
  std::vector<double> log_z(static_cast<std::size_t>(n));
  for (Eigen::Index z = 0; z < n; ++z) {
    double lmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index u = 0; u < m; ++u)
      if (q(u) > 0.0) lmax = std::max(lmax, std::log(q(u)) - s * (d_(z, u) - row_min_(z)));
    double acc = 0.0;
    for (Eigen::Index u = 0; u < m; ++u)
      if (q(u) > 0.0) acc += std::exp(std::log(q(u)) - s * (d_(z, u) - row_min_(z)) - lmax);
    log_z[static_cast<std::size_t>(z)] = lmax + std::log(acc);
  }
  double distortion = 0.0;
  for (Eigen::Index z = 0; z < n; ++z) {
    const double pz = p_[static_cast<std::size_t>(z)];
    for (Eigen::Index u = 0; u < m; ++u) {
      if (q(u) <= 0.0) continue;
      const double qz = std::exp(std::log(q(u)) - s * (d_(z, u) - row_min_(z)) - log_z[static_cast<std::size_t>(z)]);
      r(u) += pz * qz;
      distortion += pz * qz * d_(z, u);
    }
  }
  double rate = 0.0;
  for (Eigen::Index z = 0; z < n; ++z) {
    const double pz = p_[static_cast<std::size_t>(z)];
    for (Eigen::Index u = 0; u < m; ++u) {
      if (q(u) <= 0.0 || r(u) <= 0.0) continue;
      const double lq = std::log(q(u)) - s * (d_(z, u) - row_min_(z)) - log_z[static_cast<std::size_t>(z)];
      const double qz = std::exp(lq);
      if (qz > 0.0) rate += pz * qz * (lq - std::log(r(u)));
    }
  }
  out.rate = std::clamp(rate, 0.0, entropy_);
  out.distortion_sq = distortion;
  for (Eigen::Index u = 0; u < m; ++u) q_[static_cast<std::size_t>(u)] = q(u);
  last_slope_ = s;
}

double RdSolver::critical_slope() const {
  const Eigen::Index n = d_.rows();
  const Eigen::Index m = d_.cols();
  const Eigen::Index u0 = zero_rate_letter_;
  // phi_u(s) = sum_z p(z) exp(-s (d(z,u) - d(z,u0))) is convex with phi_u(0) = 1;
  // the zero-rate channel stays optimal while every phi_u <= 1.
  double s_c = std::numeric_limits<double>::infinity();
  for (Eigen::Index u = 0; u < m; ++u) {
    if (u == u0) continue;
    auto phi = [&](double sl) {
      double acc = 0.0;
      for (Eigen::Index z = 0; z < n; ++z) acc += p_[static_cast<std::size_t>(z)] * std::exp(-sl * (d_(z, u) - d_(z, u0)));
      return acc;
    };
    double slope0 = 0.0;
    bool any_negative = false;
    for (Eigen::Index z = 0; z < n; ++z) {
      const double delta = d_(z, u) - d_(z, u0);
      slope0 -= p_[static_cast<std::size_t>(z)] * delta;
      any_negative = any_negative || delta < 0.0;
    }
    if (!any_negative) continue;  // phi_u is nonincreasing
    if (slope0 >= -1e-15) return 0.0;
    double a = 0.0;
    double b = 1.0 / std::max(zero_rate_distortion_, 1e-300);
    while (phi(b) <= 1.0) {
      a = b;
      b *= 2.0;
      if (b > 1e300) break;
    }
    for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
      const double mid = 0.5 * (a + b);
      if (phi(mid) <= 1.0)
        a = mid;
      else
        b = mid;
    }
    s_c = std::min(s_c, a);
  }
  return std::isfinite(s_c) ? s_c : 0.0;
}

SlopePoint RdSolver::solve_slope(double slope, double tolerance) {
  if (!(slope >= 0.0) || !std::isfinite(slope)) fail(ErrorKind::InvalidArgument, "slope must be finite and nonnegative");
  if (!(tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  SlopePoint out;
  iterate(slope, tolerance, out);
  return out;
}

BaResult RdSolver::solve_distortion(double target, double tolerance) {
  if (!(target >= 0.0)) fail(ErrorKind::InvalidArgument, "target distortion must be nonnegative");
  if (!(tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  BaResult res;
  if (target >= zero_rate_distortion_) {
    res.distortion_sq = zero_rate_distortion_;
    return res;
  }
  const double inner_tol = tolerance / 4.0;
  bool monotone = true;
  auto solve = [&](double s) {
    SlopePoint sp = solve_slope(s, inner_tol);
    ++res.solves;
    monotone = monotone && sp.monotone;
    return sp;
  };

  // Largest slope considered: beyond it exp(-s d^2) underflows for every
  // positive distortion gap, so the channel is already deterministic.
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index z = 0; z < d_.rows(); ++z)
    for (Eigen::Index u = 0; u < d_.cols(); ++u) {
      const double g = d_(z, u) - row_min_(z);
      if (g > 0.0) min_gap = std::min(min_gap, g);
    }
  const double s_cap = std::isfinite(min_gap) ? 800.0 / min_gap : 1.0;

  // For s <= s_c the zero-rate channel is optimal, so (s_c, sigma_m^2, 0) is a
  // known point on the lower side of every bracket.
  SlopePoint lo;
  lo.slope = critical_slope();
  lo.distortion_sq = zero_rate_distortion_;
  lo.certified = true;
  SlopePoint hi;
  double s = std::max(last_slope_, lo.slope > 0.0 ? 2.0 * lo.slope : 1.0 / zero_rate_distortion_);
  s = std::min(s, s_cap);
  SlopePoint cur = solve(s);
  if (cur.distortion_sq > target) {
    lo = cur;
    for (;;) {
      if (s >= s_cap) {
        res.rate = cur.rate;
        res.distortion_sq = cur.distortion_sq;
        res.slope = s;
        res.monotone = monotone;
        return res;
      }
      s = std::min(2.0 * s, s_cap);
      cur = solve(s);
      if (cur.distortion_sq <= target) {
        hi = cur;
        break;
      }
      lo = cur;
    }
  } else {
    hi = cur;
  }

  for (std::size_t it = 0; it < max_bisections; ++it) {
    const double chord_error = (lo.distortion_sq - hi.distortion_sq) * (hi.slope - lo.slope) / 4.0;
    if (chord_error < tolerance / 4.0 || hi.distortion_sq == target) break;
    const double mid = std::sqrt(lo.slope * hi.slope);
    cur = solve(mid > lo.slope && mid < hi.slope ? mid : 0.5 * (lo.slope + hi.slope));
    if (cur.distortion_sq > target)
      lo = cur;
    else
      hi = cur;
  }

  res.slope = hi.slope;
  res.monotone = monotone;
  if (hi.distortion_sq >= target || !(lo.distortion_sq > hi.distortion_sq)) {
    res.rate = hi.rate;
    res.distortion_sq = hi.distortion_sq;
    return res;
  }
  // Mixing the two channels (time sharing) achieves every point of the chord.
  const double w = (target - hi.distortion_sq) / (lo.distortion_sq - hi.distortion_sq);
  res.rate = std::max(0.0, hi.rate + w * (lo.rate - hi.rate));
  res.distortion_sq = target;
  res.time_shared = true;
  return res;
}

BaResult blahut_arimoto(const DiscreteDistribution& mu, double target_distortion_sq, double tolerance) {
  RdSolver solver(mu);
  return solver.solve_distortion(target_distortion_sq, tolerance);
}

}  // namespace rdchain
