#include "rdchain/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include "rdchain/csv.hpp"
#include "rdchain/error.hpp"
#include "rdchain/parallel.hpp"

namespace rdchain {

std::uint64_t trial_seed(std::uint64_t seed, const std::string& experiment, std::size_t replica) {
  return mix64(seed ^ replica_stream_id(fnv1a64(experiment), replica));
}

std::vector<std::size_t> power_of_two_grid(int lo_exp, int hi_exp) {
  std::vector<std::size_t> out;
  for (int e = lo_exp; e <= hi_exp; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

namespace {

ExperimentRun collect(const std::vector<std::size_t>& ns, std::size_t replicas, std::size_t threads, double target,
                      std::uint64_t seed, const std::function<TrialRow(std::size_t, std::size_t)>& trial) {
  ExperimentRun run;
  std::vector<GridPoint> grid;
  for (const std::size_t n : ns) {
    std::vector<TrialRow> rows = parallel_map<TrialRow>(replicas, [&](std::size_t rep) { return trial(n, rep); }, threads);
    GridPoint g;
    g.n = n;
    for (auto& r : rows) {
      g.errors.push_back(r.squared_error);
      run.heuristic = run.heuristic || r.heuristic;
      run.trials.push_back(r);
    }
    grid.push_back(std::move(g));
  }
  run.report = rate_fit(grid, target, 1000, seed);
  return run;
}

}  // namespace

TrialRow toy_trial(double truth, std::size_t n, NoiseKind noise, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const double xi = draw_noise_mean(noise, n, rng);
  const double est = std::clamp(truth + xi, -1.0, 1.0);
  TrialRow row;
  row.n = n;
  row.seed = seed;
  row.squared_error = (est - truth) * (est - truth);
  row.generalization_term = 2.0 * (est - truth) * xi;
  return row;
}

ExperimentRun run_toy(const ToyConfig& cfg) {
  if (!(std::abs(cfg.truth) <= 1.0)) fail(ErrorKind::InvalidTruth, "truth must lie in [-1, 1]");
  return collect(cfg.ns, cfg.replicas, cfg.threads, -1.0, cfg.seed, [&](std::size_t n, std::size_t rep) {
    TrialRow row = toy_trial(cfg.truth, n, cfg.noise, trial_seed(cfg.seed, "toy", rep));
    row.replica = rep;
    return row;
  });
}

ExperimentRun run_ellipsoid(const EllipsoidConfig& cfg) {
  double tail = 0.0;
  for (const std::size_t n : cfg.ns) {
    const std::size_t D = cfg.truncation ? cfg.truncation : default_truncation(cfg.beta, n);
    tail = std::max(tail, sobolev_tail_sq(cfg.beta, D));
  }
  const double target = -2.0 * cfg.beta / (2.0 * cfg.beta + 1.0);
  ExperimentRun run = collect(cfg.ns, cfg.replicas, cfg.threads, target, cfg.seed, [&](std::size_t n, std::size_t rep) {
    const std::size_t D = cfg.truncation ? cfg.truncation : default_truncation(cfg.beta, n);
    const EllipsoidSpec E = sobolev_ellipsoid(cfg.beta, D);
    Eigen::VectorXd m = ellipsoid_truth(E, cfg.truth);
    if (cfg.map.kind == LipschitzMap::Kind::SoftClip) m = m.unaryExpr([&](double v) { return cfg.map.apply(v); });
    const std::uint64_t s = trial_seed(cfg.seed, "ellipsoid", rep);
    RngStream rng(s, 0);
    const ErmTrial t = erm_mean_trial(E, cfg.map, m, n, cfg.noise, rng);
    return TrialRow{n, rep, s, t.squared_error, t.generalization_term, t.heuristic};
  });
  run.max_truncation_tail = tail;
  return run;
}

ExperimentRun run_sparse(const SparseConfig& cfg) {
  const WeakLqSpec spec(cfg.q, cfg.r, cfg.d);
  const Eigen::VectorXd beta_star = sparse_truth(spec, cfg.truth);
  const double target = -(2.0 - cfg.q) / 2.0;
  return collect(cfg.ns, cfg.replicas, cfg.threads, target, cfg.seed, [&](std::size_t n, std::size_t rep) {
    const std::uint64_t s = trial_seed(cfg.seed, "sparse", rep);
    RngStream rng(s, 0);
    SparseDesign design = cfg.design == SparseDesign::Kind::OrthogonalIdentity
                              ? SparseDesign::orthogonal()
                              : SparseDesign::random_unit_columns(n, cfg.d, rng);
    const ErmTrial t = erm_sparse_trial(design, beta_star, spec, n, cfg.noise, rng);
    return TrialRow{n, rep, s, t.squared_error, t.generalization_term, t.heuristic};
  });
}

SparseEnvelope sparse_envelope(const ErmReport& report, double q, double r, std::size_t d) {
  SparseEnvelope env;
  if (report.rows.empty()) return env;
  const double e = (2.0 - q) / 2.0;
  const double R = std::pow(r, q);
  auto shape = [&](std::size_t n) { return R * std::pow(std::log(static_cast<double>(d)) / static_cast<double>(n), e); };
  const auto& last = *std::max_element(report.rows.begin(), report.rows.end(),
                                       [](const ReportRow& a, const ReportRow& b) { return a.n < b.n; });
  env.C = last.mean_mse / shape(last.n);
  env.worst_excess = -std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    const double bound = env.C * shape(row.n);
    const double excess = row.se > 0.0 ? (row.mean_mse - bound) / row.se : (row.mean_mse > bound ? INFINITY : -INFINITY);
    env.worst_excess = std::max(env.worst_excess, excess);
    if (row.mean_mse > bound + 3.0 * row.se) env.holds = false;
  }
  return env;
}

void write_trials_csv(const std::string& path, const std::vector<TrialRow>& trials) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << "n,replica,seed,squared_error,generalization_term\n";
  for (const auto& t : trials)
    out << t.n << ',' << t.replica << ',' << t.seed << ',' << format_double(t.squared_error) << ','
        << format_double(t.generalization_term) << '\n';
}

}  // namespace rdchain
