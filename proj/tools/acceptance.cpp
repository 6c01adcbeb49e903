#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "rdchain/blahut_arimoto.hpp"
#include "rdchain/constants.hpp"
#include "rdchain/csv.hpp"
#include "rdchain/ellipsoid.hpp"
#include "rdchain/experiments.hpp"
#include "rdchain/parallel.hpp"
#include "rdchain/rd_curve.hpp"
#include "rdchain/sparse.hpp"
#include "rdchain/tail.hpp"
#include "rdchain/types.hpp"
#include "rdchain/width.hpp"

namespace rdchain::acceptance {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome c1_constants(const Options&) {
  const ConstantResult c = lower_constant();
  const ConstantResult m = majorizing_constant();
  const bool ok = std::abs(c.value - 0.0935918) <= 1e-6 && std::abs(c.argmax - 0.23457905) <= 1e-5 &&
                  std::abs(m.value - 0.0218988) <= 1e-6 && std::abs(m.argmax - 1.4392) <= 1e-3;
  return {ok, fmt("c=%.9f tau*=%.8f c_bar=%.9f a*=%.6f", c.value, c.argmax, m.value, m.argmax)};
}

Outcome c2_blahut_arimoto(const Options&) {
  double worst_binary = 0.0;
  {
    auto mu = uniform_distribution(share(FiniteMetricSpace::line({0.0, 1.0})));
    RdSolver solver(mu);
    for (int k = 1; k <= 9; ++k) {
      const double D = 0.05 * k;
      const BaResult r = solver.solve_distortion(D, 1e-9);
      worst_binary = std::max(worst_binary, std::abs(r.rate - oracle::binary_uniform_rd(D)));
    }
  }
  double worst_gauss = 0.0;
  {
    std::vector<double> xs(201);
    std::vector<double> w(201);
    for (int i = 0; i < 201; ++i) {
      xs[static_cast<std::size_t>(i)] = -5.0 + 0.05 * i;
      w[static_cast<std::size_t>(i)] = std::exp(-0.5 * xs[static_cast<std::size_t>(i)] * xs[static_cast<std::size_t>(i)]);
    }
    auto mu = make_distribution(share(FiniteMetricSpace::line(xs)), w);
    const double sm2 = std::pow(sigma_m(mu), 2);
    RdSolver solver(mu);
    for (const double ratio : {0.9, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05}) {
      const BaResult r = solver.solve_distortion(ratio * sm2, 1e-7);
      worst_gauss = std::max(worst_gauss, std::abs(r.rate - oracle::gaussian_rd(sm2, ratio * sm2)));
    }
  }
  return {worst_binary <= 1e-4 && worst_gauss <= 0.02,
          fmt("binary max err %.2e (tol 1e-4), gaussian max err %.2e (tol 0.02)", worst_binary, worst_gauss)};
}

DiscreteDistribution random_measure(std::size_t max_points, Eigen::Index dim, RngStream& rng) {
  const std::size_t count = 2 + rng.uniform_index(max_points - 1);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(count), dim);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j) pts(i, j) = rng.normal();
  std::vector<double> w(count);
  for (auto& x : w) x = rng.uniform_open();
  return make_distribution(share(FiniteMetricSpace::from_points(pts)), w);
}

Outcome c3_penalized(const Options& o) {
  RngStream rng(o.seed, 0x63334ULL);
  double lo_ratio = INFINITY;
  double hi_ratio = 0.0;
  int failures = 0;
  for (int k = 0; k < 50; ++k) {
    const DiscreteDistribution mu = random_measure(8, 2, rng);
    const double I = rd_integral(rd_curve(mu));
    const double P = penalized_rd_integral(mu);
    lo_ratio = std::min(lo_ratio, P / I);
    hi_ratio = std::max(hi_ratio, P / I);
    if (P < 2 * I - 1e-3 || P > 4 * I + 1e-3) ++failures;
  }
  return {failures == 0, fmt("50 measures, P/I in [%.3f, %.3f], %d outside [2I, 4I] +- 1e-3", lo_ratio, hi_ratio, failures)};
}

Outcome c4_width_sandwich(const Options& o) {
  const int instances = o.fast ? 5 : 20;
  const std::size_t mc = o.fast ? 10000 : 100000;
  const std::size_t pairs = o.fast ? 1024 : 4096;
  RngStream rng(o.seed, 0x63344ULL);
  int failures = 0;
  double lo_ratio = INFINITY;
  double hi_ratio = 0.0;
  for (int k = 0; k < instances; ++k) {
    const DiscreteDistribution mu = random_measure(12, 3, rng);
    const LinearProcessSpec process(mu.space().embedding());
    const SandwichReport s = sandwich_check(process, mu, pairs, rng, 50, o.threads);
    const WidthEstimate sup = mc_sup(process, mc, rng, o.threads);
    if (!s.pass() || s.width > sup.value + 3 * (sup.std_error + s.width_se)) ++failures;
    lo_ratio = std::min(lo_ratio, s.width / s.rd_integral);
    hi_ratio = std::max(hi_ratio, s.width / s.rd_integral);
  }
  return {failures == 0, fmt("%d instances (%zu pairs, %zu MC), w/I in [%.3f, %.3f] vs [%.4f, 48], %d failures",
                             instances, pairs, mc, lo_ratio, hi_ratio, lower_constant().value, failures)};
}

Outcome c5_types(const Options& o) {
  RngStream rng(o.seed, 0x63354ULL);
  int checked = 0;
  int failures = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t N = 1; N <= 8; ++N) {
      const auto types = enumerate_types(n, N);
      if (types.size() != binomial(n + N - 1, n - 1)) ++failures;
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> mu(n);
        for (auto& x : mu) x = trial == 0 ? 1.0 : rng.uniform_open();
        const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
        for (auto& x : mu) x /= total;
        // Brute-force mass of each type class over all n^N sequences.
        std::map<std::vector<std::size_t>, double> mass;
        std::size_t sequences = 1;
        for (std::size_t i = 0; i < N; ++i) sequences *= n;
        for (std::size_t s = 0; s < sequences; ++s) {
          std::vector<std::size_t> counts(n, 0);
          double p = 1.0;
          for (std::size_t i = 0, code = s; i < N; ++i, code /= n) {
            ++counts[code % n];
            p *= mu[code % n];
          }
          mass[counts] += p;
        }
        for (const auto& counts : types) {
          std::vector<double> nu(n);
          for (std::size_t i = 0; i < n; ++i) nu[i] = static_cast<double>(counts[i]) / static_cast<double>(N);
          const TypeClassReport rep = type_class_report(mu, nu, N);
          ++checked;
          const double brute = mass[counts];
          if (!rep.sandwich_holds() || rep.type_count != types.size() ||
              std::abs(rep.exact_mass - brute) > 1e-12 * std::max(1.0, brute))
            ++failures;
        }
      }
    }
  }
  return {failures == 0, fmt("%d type classes checked against enumeration, %d failures", checked, failures)};
}

Outcome c6_toy(const Options& o) {
  ToyConfig cfg;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const ExperimentRun run = run_toy(cfg);
  const double s = run.report.slope;
  return {std::abs(s + 1.0) <= 0.07, fmt("slope %.4f (target -1 +- 0.07), 95%% CI [%.4f, %.4f]", s,
                                         run.report.ci_low, run.report.ci_high)};
}

Outcome c7_ellipsoid(const Options& o) {
  bool ok = true;
  std::string detail;
  for (const double beta : {1.0, 2.0}) {
    EllipsoidConfig cfg;
    cfg.beta = beta;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    const ExperimentRun run = run_ellipsoid(cfg);
    const bool pass = std::abs(run.report.slope - run.report.target) <= 0.07;
    ok = ok && pass;
    detail += fmt("%sbeta=%g slope %.4f (target %.4f +- 0.07)", detail.empty() ? "" : "; ", beta, run.report.slope,
                  run.report.target);
  }
  return {ok, detail};
}

Outcome c8_preconstant(const Options&) {
  double worst = 0.0;
  std::map<double, double> ratio;
  for (const double beta : {0.55, 0.75, 1.0}) {
    const double dudley = sobolev_dudley_sum_limit(beta);
    const double sharp = sobolev_sharp_width_limit(beta);
    worst = std::max(worst, std::abs(dudley - 1.0 / (1.0 - std::pow(2.0, -(beta - 0.5)))));
    worst = std::max(worst, std::abs(sharp - std::sqrt(std::riemann_zeta(2.0 * beta))));
    ratio[beta] = dudley / sharp;
  }
  const double factor = ratio[0.55] / ratio[1.0];
  return {worst <= 1e-6 && factor > 3.0, fmt("max oracle err %.2e; ratio %.3f at 0.55 vs %.3f at 1.0 (factor %.3f)", worst,
                                             ratio[0.55], ratio[1.0], factor)};
}

Outcome c9_sparse(const Options& o) {
  SparseConfig cfg;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const ExperimentRun run = run_sparse(cfg);
  const SparseEnvelope env = sparse_envelope(run.report, cfg.q, cfg.r, cfg.d);
  const bool ok = std::abs(run.report.slope + 0.75) <= 0.10 && env.holds;
  return {ok, fmt("slope %.4f (target -0.75 +- 0.10); C=%.4f, worst excess %.2f SE (limit 3)", run.report.slope, env.C,
                  env.worst_excess)};
}

Outcome c10_projections(const Options& o) {
  RngStream rng(o.seed, 0x63314ULL);
  double worst_kkt = 0.0;
  double worst_gap = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto d = static_cast<Eigen::Index>(1 + rng.uniform_index(5));
    std::vector<double> axes(static_cast<std::size_t>(d));
    for (auto& a : axes) a = 0.1 + 1.9 * rng.uniform();
    std::sort(axes.begin(), axes.end(), std::greater<>());
    const EllipsoidSpec E(Eigen::Map<Eigen::VectorXd>(axes.data(), d));
    Eigen::VectorXd x(d);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = 2.0 * rng.normal();
    const EllipsoidProjection p = project_ellipsoid_report(x, E);
    worst_kkt = std::max(worst_kkt, p.kkt_residual);
    worst_gap = std::max(worst_gap, (p.point - oracle::ellipsoid_dual_projection(x, E.axes)).cwiseAbs().maxCoeff());
  }
  int lq_failures = 0;
  for (int k = 0; k < 100; ++k) {
    const double q = 0.2 + 0.7 * rng.uniform();
    const WeakLqSpec spec(q, 1.0, 3);
    Eigen::Vector3d x(1.5 * rng.normal(), 1.5 * rng.normal(), 1.5 * rng.normal());
    const Eigen::VectorXd p = project_weak_lq(x, spec);
    const auto grid = oracle::weak_lq_grid_projection(x, q, 1.0);
    if (!spec.contains(p) || (p - x).norm() > grid.distance + grid.resolution) ++lq_failures;
  }
  return {worst_kkt < 1e-10 && worst_gap <= 1e-6 && lq_failures == 0,
          fmt("ellipsoid KKT %.2e, oracle gap %.2e; weak-lq grid mismatches %d/100", worst_kkt, worst_gap, lq_failures)};
}

Outcome c11_tail(const Options& o) {
  const std::size_t n = 4096;
  const std::size_t replicas = o.fast ? 500 : 2000;
  const double lambda = static_cast<double>(n) / 72.0;
  const EllipsoidSpec E = sobolev_ellipsoid(1.0, default_truncation(1.0, n));
  const Eigen::VectorXd m = ellipsoid_truth(E, "half");
  const double psi = psi_bound(lambda, static_cast<double>(n), ellipsoid_G(1.0));
  const double t0 = tail_threshold(psi, lambda, 0.05);
  const std::vector<double> sq = parallel_map<double>(
      replicas,
      [&](std::size_t r) {
        RngStream rng(trial_seed(o.seed, "tail", r), 0);
        return erm_mean_trial(E, LipschitzMap::identity(), m, n, NoiseKind::Gaussian, rng).squared_error;
      },
      o.threads);
  double top = -INFINITY;
  for (const double s : sq) top = std::max(top, lambda * s);
  double acc = 0.0;
  std::size_t exceed = 0;
  for (const double s : sq) {
    acc += std::exp(lambda * s - top);
    if (std::sqrt(s) > t0) ++exceed;
  }
  const double log_mgf = top + std::log(acc / static_cast<double>(replicas));
  const double freq = static_cast<double>(exceed) / static_cast<double>(replicas);
  const double limit = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / static_cast<double>(replicas));
  return {log_mgf <= psi + 0.1 && freq <= limit,
          fmt("ln E exp(lambda err) = %.4f <= psi %.4f + 0.1; exceedance at t0=%.4f: %.4f <= %.4f", log_mgf, psi, t0,
              freq, limit)};
}

Outcome c12_quantizer(const Options& o) {
  const std::size_t samples = 20000;
  int gap_failures = 0;
  int entropy_failures = 0;
  std::string detail;
  for (const double q : {0.3, 0.5, 0.7}) {
    const WeakLqSpec spec(q, 1.0, 8);
    RngStream rng(o.seed, fnv1a64("quantizer") ^ static_cast<std::uint64_t>(q * 1000));
    const Eigen::MatrixXd Z = sample_weak_lq(spec, samples, rng);
    const double l1 = Z.cwiseAbs().rowwise().sum().mean();
    double prev = INFINITY;
    for (int k = 0; k < 8; ++k) {
      const double b = l1 * std::pow(2.0, -3.0 + 0.5 * k);
      const QuantizerResult r = quantize_weak_lq(Z, q, spec.r, b);
      if (r.mean_abs_gap > b + 3.0 * r.gap_se) ++gap_failures;
      if (r.entropy > prev + 1e-12) ++entropy_failures;
      prev = r.entropy;
    }
  }
  return {gap_failures == 0 && entropy_failures == 0,
          fmt("24 cells: %d gap violations, %d entropy increases", gap_failures, entropy_failures)};
}

struct Entry {
  int id;
  const char* name;
  double limit;
  Outcome (*fn)(const Options&);
};

const Entry kEntries[] = {
    {1, "constants", 1.0, c1_constants},
    {2, "blahut-arimoto", 30.0, c2_blahut_arimoto},
    {3, "penalized sandwich", 120.0, c3_penalized},
    {4, "width sandwich", 600.0, c4_width_sandwich},
    {5, "method of types", 1.0, c5_types},
    {6, "toy erm rate", 60.0, c6_toy},
    {7, "ellipsoid erm rate", 600.0, c7_ellipsoid},
    {8, "preconstant separation", 1.0, c8_preconstant},
    {9, "sparse erm rate", 600.0, c9_sparse},
    {10, "projection oracles", 120.0, c10_projections},
    {11, "tail bound", 900.0, c11_tail},
    {12, "quantizer", 120.0, c12_quantizer},
};

}  // namespace

std::vector<CriterionResult> run(const Options& options, const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  for (const Entry& e : kEntries) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.limit_seconds = e.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = e.fn(options);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.limit_seconds) {
      r.pass = false;
      r.detail += fmt(" [over time limit %.0f s]", r.limit_seconds);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("criterion %2d %-24s %s  %s (%.2f s)", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str(),
             r.seconds);
}

namespace {

// name,value rows after a header line.
bool read_named_values(const std::string& path, std::map<std::string, double>& out, std::string& why) {
  std::ifstream in(path);
  if (!in) {
    why = "cannot open";
    return false;
  }
  std::string line;
  std::getline(in, line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    try {
      std::size_t used = 0;
      if (cells.size() != 2) throw std::invalid_argument("fields");
      out[cells[0]] = std::stod(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument("number");
    } catch (const std::exception&) {
      why = fmt("malformed line %zu", lineno);
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<CriterionResult> check_golden(const std::string& directory) {
  std::vector<CriterionResult> out;
  auto check = [&](const std::string& file, const std::map<std::string, double>& fresh, double tol) {
    CriterionResult r;
    r.name = "golden " + file;
    const std::string path = directory + "/" + file;
    std::map<std::string, double> frozen;
    std::string why;
    if (!read_named_values(path, frozen, why)) {
      r.detail = path + ": " + why;
    } else {
      double worst = 0.0;
      std::string missing;
      for (const auto& [k, v] : fresh) {
        auto it = frozen.find(k);
        if (it == frozen.end()) missing += (missing.empty() ? "" : ",") + k;
        else worst = std::max(worst, std::abs(it->second - v));
      }
      r.pass = missing.empty() && frozen.size() == fresh.size() && worst <= tol;
      r.detail = r.pass ? fmt("%s: max diff %.2e", path.c_str(), worst)
                        : fmt("%s: mismatch (max diff %.2e, missing [%s])", path.c_str(), worst, missing.c_str());
    }
    out.push_back(r);
  };

  const ConstantResult c = lower_constant();
  const ConstantResult m = majorizing_constant();
  check("constants.csv", {{"c", c.value}, {"tau_star", c.argmax}, {"c_bar", m.value}, {"a_star", m.argmax}}, 1e-9);

  std::map<std::string, double> rates;
  auto mu = uniform_distribution(share(FiniteMetricSpace::line({0.0, 1.0})));
  RdSolver solver(mu);
  for (int k = 1; k <= 9; ++k) rates[fmt("%.2f", 0.05 * k)] = solver.solve_distortion(0.05 * k, 1e-9).rate;
  check("binary_rd.csv", rates, 1e-6);
  return out;
}

}  // namespace rdchain::acceptance
