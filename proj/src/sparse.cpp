#include "rdchain/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rdchain/error.hpp"
#include "rdchain/info.hpp"

namespace rdchain {

WeakLqSpec::WeakLqSpec(double q_, double r_, std::size_t d_) : q(q_), r(r_), d(d_) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "r must be positive");
  if (d == 0) fail(ErrorKind::InvalidArgument, "d must be positive");
}

double WeakLqSpec::R() const { return std::pow(r, q); }

double WeakLqSpec::cap(std::size_t k) const { return r * std::pow(static_cast<double>(k), -1.0 / q); }

bool WeakLqSpec::contains(const Eigen::VectorXd& x, double tol) const {
  return weak_lq_radius(x, q) <= r * (1.0 + tol);
}

namespace {

std::vector<Eigen::Index> order_by_magnitude(const Eigen::VectorXd& x) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return std::abs(x(a)) > std::abs(x(b)); });
  return idx;
}

}  // namespace

double weak_lq_radius(const Eigen::VectorXd& x, double q) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  const auto idx = order_by_magnitude(x);
  double best = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k)
    best = std::max(best, std::pow(static_cast<double>(k + 1), 1.0 / q) * std::abs(x(idx[k])));
  return best;
}

Eigen::VectorXd project_weak_lq(const Eigen::VectorXd& x, const WeakLqSpec& spec) {
  if (static_cast<std::size_t>(x.size()) != spec.d) fail(ErrorKind::InvalidArgument, "dimension mismatch");
  const auto idx = order_by_magnitude(x);
  Eigen::VectorXd out = x;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double c = spec.cap(k + 1);
    const double v = x(idx[k]);
    if (std::abs(v) > c) out(idx[k]) = std::copysign(c, v);
  }
  return out;
}

SparseDesign SparseDesign::random_unit_columns(std::size_t n, std::size_t d, RngStream& rng) {
  SparseDesign out;
  out.kind = Kind::RandomUnitColumns;
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < out.X.cols(); ++j)
    for (Eigen::Index i = 0; i < out.X.rows(); ++i) out.X(i, j) = rng.normal();
  for (Eigen::Index j = 0; j < out.X.cols(); ++j) out.X.col(j) *= std::sqrt(static_cast<double>(n)) / out.X.col(j).norm();
  return out;
}

SparseDesign SparseDesign::custom(Eigen::MatrixXd X) {
  if (X.rows() == 0 || X.cols() == 0) fail(ErrorKind::InvalidDesign, "empty design");
  const double sn = std::sqrt(static_cast<double>(X.rows()));
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    if (std::abs(X.col(j).norm() / sn - 1.0) > 1e-9)
      fail(ErrorKind::InvalidDesign, "column " + std::to_string(j) + " of X/sqrt(n) does not have unit norm");
  SparseDesign out;
  out.kind = Kind::RandomUnitColumns;
  out.X = std::move(X);
  return out;
}

SparseDesign::Kind parse_design_kind(const std::string& name) {
  if (name == "orthogonal_identity") return SparseDesign::Kind::OrthogonalIdentity;
  if (name == "random_unit_columns") return SparseDesign::Kind::RandomUnitColumns;
  fail(ErrorKind::InvalidDesign, "unknown design '" + name + "'");
}

Eigen::VectorXd sparse_truth(const WeakLqSpec& spec, const std::string& kind) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.d));
  if (kind == "zero") return b;
  if (kind == "half") {
    for (std::size_t k = 0; k < spec.d; ++k) b(static_cast<Eigen::Index>(k)) = 0.5 * spec.cap(k + 1);
    return b;
  }
  if (kind.rfind("boundary", 0) == 0) {
    std::size_t K = 0;
    try {
      K = std::stoul(kind.substr(8));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidTruth, "unknown truth '" + kind + "'");
    }
    for (std::size_t k = 0; k < std::min(K, spec.d); ++k) b(static_cast<Eigen::Index>(k)) = spec.cap(k + 1);
    return b;
  }
  fail(ErrorKind::InvalidTruth, "unknown truth '" + kind + "'");
}

ErmTrial erm_sparse_trial(const SparseDesign& design, const Eigen::VectorXd& beta_star, const WeakLqSpec& spec,
                          std::size_t n, NoiseKind noise, RngStream& rng) {
  if (static_cast<std::size_t>(beta_star.size()) != spec.d) fail(ErrorKind::InvalidArgument, "dimension mismatch");
  if (!spec.contains(beta_star, 1e-9)) fail(ErrorKind::InvalidTruth, "beta* is outside the weak l_q ball");
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  ErmTrial trial;
  trial.n = n;
  trial.seed = rng.seed();
  const double sn = std::sqrt(static_cast<double>(n));

  if (design.kind == SparseDesign::Kind::OrthogonalIdentity) {
    Eigen::VectorXd xi(beta_star.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = draw_noise(noise, rng) / sn;
    trial.estimate = project_weak_lq(beta_star + xi, spec);
    const Eigen::VectorXd diff = trial.estimate - beta_star;
    trial.squared_error = diff.squaredNorm();
    trial.generalization_term = 2.0 * diff.dot(xi);
    return trial;
  }

  const Eigen::MatrixXd& X = design.X;
  if (static_cast<std::size_t>(X.rows()) != n || static_cast<std::size_t>(X.cols()) != spec.d)
    fail(ErrorKind::InvalidDesign, "design shape does not match (n, d)");
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    if (std::abs(X.col(j).norm() / sn - 1.0) > 1e-9) fail(ErrorKind::InvalidDesign, "design columns must have norm sqrt(n)");
  trial.heuristic = true;
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = draw_noise(noise, rng);
  const Eigen::VectorXd Y = X * beta_star + w;
  const double dn = static_cast<double>(n);
  auto risk = [&](const Eigen::VectorXd& b) { return (Y - X * b).squaredNorm() / dn; };
  const Eigen::MatrixXd gram = X.transpose() * X / dn;
  const double L = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();

  std::vector<Eigen::VectorXd> starts{Eigen::VectorXd::Zero(beta_star.size()), project_weak_lq(X.transpose() * Y / dn, spec)};
  RngStream local(rng.next_u64(), 29);
  while (starts.size() < 20) {
    Eigen::VectorXd g(beta_star.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = local.normal();
    starts.push_back(project_weak_lq(g * (spec.cap(1) * local.uniform()), spec));
  }
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::VectorXd b : starts) {
    double value = risk(b);
    double step = 1.0 / L;
    for (int it = 0; it < 5000; ++it) {
      const Eigen::VectorXd grad = -2.0 * X.transpose() * (Y - X * b) / dn;
      Eigen::VectorXd next;
      double next_value = value;
      for (int bt = 0; bt < 60; ++bt) {
        next = project_weak_lq(b - step * grad, spec);
        next_value = risk(next);
        const Eigen::VectorXd delta = next - b;
        if (next_value <= value + grad.dot(delta) + 0.5 / step * delta.squaredNorm()) break;
        step *= 0.5;
      }
      if (next_value >= value) break;
      const double change = value - next_value;
      b = std::move(next);
      value = next_value;
      if (change <= 1e-9 * std::max(value, 1e-300)) break;
    }
    if (value < best) {
      best = value;
      trial.estimate = b;
    }
  }
  const Eigen::VectorXd fit = X * (trial.estimate - beta_star);
  trial.squared_error = fit.squaredNorm() / dn;
  trial.generalization_term = 2.0 * fit.dot(w) / dn;
  return trial;
}

double quantizer_step(double q, double r, double b) {
  if (r <= 0.0) return std::numeric_limits<double>::infinity();
  return r * std::pow((1.0 - q) / (2.0 - q) * b / r, 1.0 / (1.0 - q));
}

QuantizerResult quantize_weak_lq(const Eigen::MatrixXd& z_samples, double q, double r, double b) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  if (!(b > 0.0)) fail(ErrorKind::InvalidArgument, "b must be positive");
  if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "r must be positive");
  const Eigen::Index N = z_samples.rows();
  const Eigen::Index d = z_samples.cols();
  if (N == 0) fail(ErrorKind::InvalidArgument, "no samples");
  QuantizerResult out;
  out.U = Eigen::MatrixXd::Zero(N, d);
  out.coordinate_radius.assign(static_cast<std::size_t>(d), 0.0);

  // Empirical r_j = sup_t t P[|Z_j| > t]^{1/q}, attained just below an order statistic.
  double total_q = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<double> mag(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) mag[static_cast<std::size_t>(i)] = std::abs(z_samples(i, j));
    std::sort(mag.begin(), mag.end(), std::greater<>());
    double rj = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k)
      rj = std::max(rj, mag[k] * std::pow(static_cast<double>(k + 1) / static_cast<double>(N), 1.0 / q));
    out.coordinate_radius[static_cast<std::size_t>(j)] = rj;
    total_q += std::pow(rj, q);
  }

  std::vector<double> gaps(static_cast<std::size_t>(N), 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double rj = out.coordinate_radius[static_cast<std::size_t>(j)];
    if (rj == 0.0) continue;
    const double bj = std::pow(rj, q) * b / total_q;
    const double step = quantizer_step(q, rj, bj);
    for (Eigen::Index i = 0; i < N; ++i) {
      const double z = z_samples(i, j);
      const double u = std::copysign(std::floor(std::abs(z) / step) * step, z);
      out.U(i, j) = u;
      gaps[static_cast<std::size_t>(i)] += std::abs(z - u);
    }
  }
  double mean = 0.0;
  for (const double g : gaps) mean += g;
  mean /= static_cast<double>(N);
  double var = 0.0;
  for (const double g : gaps) var += (g - mean) * (g - mean);
  out.mean_abs_gap = mean;
  out.gap_se = N > 1 ? std::sqrt(var / static_cast<double>(N - 1) / static_cast<double>(N)) : 0.0;

  std::map<std::vector<double>, std::size_t> counts;
  for (Eigen::Index i = 0; i < N; ++i) {
    std::vector<double> row(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = out.U(i, j);
    ++counts[row];
  }
  std::vector<double> p;
  p.reserve(counts.size());
  for (const auto& [row, c] : counts) p.push_back(static_cast<double>(c) / static_cast<double>(N));
  out.entropy = entropy(p);
  return out;
}

Eigen::MatrixXd sample_weak_lq(const WeakLqSpec& spec, std::size_t count, RngStream& rng) {
  const auto d = static_cast<Eigen::Index>(spec.d);
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(count), d);
  std::vector<std::size_t> perm(spec.d);
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = spec.d; k > 1; --k) std::swap(perm[k - 1], perm[rng.uniform_index(k)]);
    for (Eigen::Index j = 0; j < d; ++j)
      Z(i, j) = rng.rademacher() * rng.uniform() * spec.cap(perm[static_cast<std::size_t>(j)] + 1);
  }
  return Z;
}

double f_func(double x) {
  if (!(x > 0.0)) fail(ErrorKind::InvalidArgument, "f needs x > 0");
  const double e_inv = std::exp(-1.0);
  return x < e_inv ? x * std::sqrt(std::log(1.0 / x)) : e_inv;
}

const EnvelopePoints& envelope_points() {
  // Common tangent of x ln(1/x) at a1 and ln x at a2: slope ln(1/a1) - 1 = 1/a2
  // and a1 + 1 = ln a2, which reduces to ln(1/a1) - 1 = exp(-1 - a1).
  static const EnvelopePoints pts = [] {
    auto h = [](double a) { return std::log(1.0 / a) - 1.0 - std::exp(-1.0 - a); };
    double lo = 1e-12;
    double hi = std::exp(-1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (h(mid) > 0.0) lo = mid; else hi = mid;
    }
    EnvelopePoints p;
    p.a1 = 0.5 * (lo + hi);
    p.a2 = std::exp(1.0 + p.a1);
    p.slope = 1.0 / p.a2;
    return p;
  }();
  return pts;
}

double g_env(double x) {
  if (!(x > 0.0)) fail(ErrorKind::InvalidArgument, "g needs x > 0");
  const EnvelopePoints& p = envelope_points();
  if (x < p.a1) return x * std::log(1.0 / x);
  if (x > p.a2) return std::log(x);
  return p.a1 * std::log(1.0 / p.a1) + p.slope * (x - p.a1);
}

double sparse_rd_bound(double q, double r, double eps, double d, double d_threshold) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  if (!(r > 0.0) || !(eps > 0.0)) fail(ErrorKind::InvalidArgument, "r and eps must be positive");
  if (!(d > d_threshold)) fail(ErrorKind::InvalidArgument, "d must exceed the threshold");
  return std::pow(r / eps, 2.0 * q / (2.0 - q)) * std::log(d);
}

double sparse_width_moment_G(double q, double r, double d, double E) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  if (E < 0.0) fail(ErrorKind::InvalidArgument, "E must be nonnegative");
  return std::sqrt(std::log(d)) * std::pow(r, q / (2.0 - q)) * std::pow(E, (1.0 - q) / (2.0 - q));
}

}  // namespace rdchain
