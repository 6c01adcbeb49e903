#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "rdchain/constants.hpp"
#include "rdchain/csv.hpp"
#include "rdchain/error.hpp"
#include "rdchain/experiments.hpp"
#include "rdchain/parallel.hpp"
#include "rdchain/rd_curve.hpp"
#include "rdchain/tail.hpp"
#include "rdchain/width.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Schema violations and unreadable input; reported with exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_of_offset(text, pos);
    pos = after;
  }
  return 1;
}

enum class Kind { Number, Integer, String, Bool, IntArray, NumArray, Points };

struct Field {
  std::string name;
  Kind kind;
  json fallback;
  double min = -INFINITY;
  double max = INFINITY;
  std::vector<std::string> choices;
};

using Schema = std::vector<Field>;

const std::vector<std::size_t> kToyGrid = rdchain::power_of_two_grid(6, 14);
const std::vector<std::size_t> kEllipsoidGrid = rdchain::power_of_two_grid(8, 14);
const std::vector<std::size_t> kSparseGrid = rdchain::power_of_two_grid(6, 12);
const std::vector<std::string> kNoise{"gaussian", "rademacher_scaled", "uniform_scaled"};

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s{
      {"constants", {}},
      {"rd_curve",
       {{"points", Kind::Points, json::array({0.0, 1.0})},
        {"weights", Kind::NumArray, json::array(), 0.0},
        {"grid_points", Kind::Integer, 128, 2, 100000},
        {"tolerance", Kind::Number, 1e-7, 1e-14, 1e-1},
        {"penalized", Kind::Bool, false}}},
      {"sandwich",
       {{"instances", Kind::Integer, 20, 1, 10000},
        {"max_points", Kind::Integer, 12, 2, 64},
        {"dim", Kind::Integer, 3, 1, 64},
        {"pairs", Kind::Integer, 4096, 2, 4096},
        {"mc_samples", Kind::Integer, 100000, 100, 1e9},
        {"bootstrap", Kind::Integer, 50, 0, 10000}}},
      {"erm_toy",
       {{"n_grid", Kind::IntArray, json(kToyGrid), 1},
        {"replicas", Kind::Integer, 200, 10, 1e7},
        {"truth", Kind::Number, 0.5, -1.0, 1.0},
        {"noise_kind", Kind::String, "gaussian", -INFINITY, INFINITY, kNoise}}},
      {"erm_ellipsoid",
       {{"beta", Kind::Number, 1.0, 0.5, 100},
        {"n_grid", Kind::IntArray, json(kEllipsoidGrid), 1},
        {"replicas", Kind::Integer, 50, 10, 1e7},
        {"noise_kind", Kind::String, "gaussian", -INFINITY, INFINITY, kNoise},
        {"map", Kind::String, "identity", -INFINITY, INFINITY, {"identity", "soft_clip"}},
        {"kappa", Kind::Number, 1.0, 1e-6, 1.0},
        {"truth", Kind::String, "half", -INFINITY, INFINITY, {"half", "zero"}},
        {"truncation", Kind::Integer, 0, 0, 1e7}}},
      {"erm_sparse",
       {{"q", Kind::Number, 0.5, 1e-6, 1 - 1e-6},
        {"r", Kind::Number, 1.0, 1e-12, 1e12},
        {"d", Kind::Integer, 512, 1, 1e6},
        {"n_grid", Kind::IntArray, json(kSparseGrid), 1},
        {"replicas", Kind::Integer, 50, 10, 1e7},
        {"design", Kind::String, "orthogonal_identity", -INFINITY, INFINITY, {"orthogonal_identity", "random_unit_columns"}},
        {"truth", Kind::String, "zero"},
        {"noise_kind", Kind::String, "gaussian", -INFINITY, INFINITY, kNoise}}},
      {"quantizer",
       {{"q", Kind::Number, 0.5, 1e-6, 1 - 1e-6},
        {"r", Kind::Number, 1.0, 1e-12, 1e12},
        {"d", Kind::Integer, 8, 1, 4096},
        {"samples", Kind::Integer, 20000, 2, 1e7},
        {"b_grid", Kind::NumArray, json::array(), 1e-300}}},
      {"tail",
       {{"beta", Kind::Number, 1.0, 0.5, 100},
        {"n", Kind::Integer, 4096, 1, 1e9},
        {"replicas", Kind::Integer, 2000, 10, 1e7},
        {"lambda_divisor", Kind::Number, 72.0, 1e-6, 1e12},
        {"variant", Kind::String, "log_sobolev", -INFINITY, INFINITY, {"log_sobolev", "subgaussian"}},
        {"C", Kind::Number, 1.0, 1e-12, 1e12},
        {"K_prime", Kind::Number, 432.0, 1e-12, 1e12}}},
  };
  return s;
}

const std::set<std::string> kCommonKeys{"experiment", "seed", "out", "threads"};

struct Config {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::size_t threads = 0;
  json params = json::object();  // every schema field, defaults filled in
};

std::string where(const std::string& source, std::size_t line) { return source + ":" + std::to_string(line) + ": "; }

std::string short_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void check_field(const Field& f, const json& v, const std::string& loc) {
  auto bad = [&](const std::string& what) { throw ConfigError(loc + "key '" + f.name + "': " + what); };
  auto number_in_range = [&](const json& x, bool integral) {
    if (integral ? !x.is_number_integer() : !x.is_number()) bad(integral ? "expected an integer" : "expected a number");
    const double d = x.get<double>();
    if (!std::isfinite(d)) bad("must be finite");
    if (integral && x.is_number_integer() && !x.is_number_unsigned() && x.get<long long>() < 0 && f.min >= 0) bad("must be nonnegative");
    if (d < f.min || d > f.max) bad("value " + x.dump() + " out of range [" + short_double(f.min) + ", " +
                                    short_double(f.max) + "]");
  };
  switch (f.kind) {
    case Kind::Number: number_in_range(v, false); break;
    case Kind::Integer: number_in_range(v, true); break;
    case Kind::Bool:
      if (!v.is_boolean()) bad("expected true or false");
      break;
    case Kind::String:
      if (!v.is_string()) bad("expected a string");
      if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end()) {
        std::string opts;
        for (const auto& c : f.choices) opts += (opts.empty() ? "" : ", ") + c;
        bad("'" + v.get<std::string>() + "' is not one of {" + opts + "}");
      }
      if (f.name == "truth" && f.choices.empty()) {
        const auto t = v.get<std::string>();
        const bool boundary = t.size() > 8 && t.rfind("boundary", 0) == 0 &&
                              std::all_of(t.begin() + 8, t.end(), [](unsigned char c) { return std::isdigit(c); });
        if (t != "zero" && t != "half" && !boundary) bad("'" + t + "' is not zero, half or boundaryK");
      }
      break;
    case Kind::IntArray:
    case Kind::NumArray:
      if (!v.is_array()) bad("expected an array");
      for (const auto& x : v) number_in_range(x, f.kind == Kind::IntArray);
      if (f.name == "n_grid" && std::set<std::size_t>(v.begin(), v.end()).size() < 4)
        bad("needs at least 4 distinct sample sizes");
      break;
    case Kind::Points: {
      if (!v.is_array() || v.empty()) bad("expected a nonempty array of numbers or of coordinate arrays");
      const bool nested = v.front().is_array();
      std::size_t dim = nested ? v.front().size() : 1;
      for (const auto& p : v) {
        if (nested != p.is_array()) bad("mixes numbers and coordinate arrays");
        if (nested) {
          if (p.size() != dim || dim == 0) bad("coordinate arrays must share one nonzero length");
          for (const auto& x : p)
            if (!x.is_number()) bad("coordinates must be numbers");
        } else if (!p.is_number()) {
          bad("points must be numbers");
        }
      }
      break;
    }
  }
}

Config parse_config(const std::string& text, const std::string& source, const std::string& forced_experiment) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(where(source, line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) + "invalid JSON: " + e.what());
  }
  if (!root.is_object()) throw ConfigError(where(source, 1) + "top level must be an object");

  Config cfg;
  if (root.contains("experiment")) {
    if (!root["experiment"].is_string())
      throw ConfigError(where(source, line_of_key(text, "experiment")) + "key 'experiment': expected a string");
    cfg.experiment = root["experiment"].get<std::string>();
  }
  if (!forced_experiment.empty()) {
    if (!cfg.experiment.empty() && cfg.experiment != forced_experiment)
      throw ConfigError(where(source, line_of_key(text, "experiment")) + "experiment '" + cfg.experiment +
                        "' does not match subcommand (expects '" + forced_experiment + "')");
    cfg.experiment = forced_experiment;
  }
  if (cfg.experiment.empty()) throw ConfigError(where(source, 1) + "missing key 'experiment'");
  const auto it = schemas().find(cfg.experiment);
  if (it == schemas().end()) {
    std::string known;
    for (const auto& [k, _] : schemas()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError(where(source, line_of_key(text, "experiment")) + "unknown experiment '" + cfg.experiment +
                      "' (known: " + known + ")");
  }
  const Schema& schema = it->second;

  for (const auto& [key, value] : root.items()) {
    const std::string loc = where(source, line_of_key(text, key));
    if (key == "experiment") continue;
    if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError(loc + "key 'seed': expected a nonnegative integer");
      cfg.seed = value.get<std::uint64_t>();
      continue;
    }
    if (key == "threads") {
      if (!value.is_number_unsigned()) throw ConfigError(loc + "key 'threads': expected a nonnegative integer");
      cfg.threads = value.get<std::size_t>();
      continue;
    }
    if (key == "out") {
      if (!value.is_string()) throw ConfigError(loc + "key 'out': expected a string");
      cfg.out = value.get<std::string>();
      continue;
    }
    const auto f = std::find_if(schema.begin(), schema.end(), [&](const Field& x) { return x.name == key; });
    if (f == schema.end()) throw ConfigError(loc + "unknown key '" + key + "' for experiment '" + cfg.experiment + "'");
    check_field(*f, value, loc);
  }
  for (const Field& f : schema) cfg.params[f.name] = root.contains(f.name) ? root[f.name] : f.fallback;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    files_.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw rdchain::Error(rdchain::ErrorKind::InvalidArgument, "cannot write " + (dir_ / name).string());
    return out;
  }
  std::string path(const std::string& name) {
    files_.push_back(name);
    return (dir_ / name).string();
  }
  void named_values(const std::string& name, const std::vector<std::pair<std::string, double>>& rows) {
    auto out = open(name);
    out << "name,value\n";
    for (const auto& [k, v] : rows) out << k << ',' << rdchain::format_double(v) << '\n';
  }
  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::vector<std::size_t> sizes(const json& a) {
  std::vector<std::size_t> out;
  for (const auto& x : a) out.push_back(x.get<std::size_t>());
  return out;
}

void write_erm(Output& out, const rdchain::ExperimentRun& run, std::vector<std::pair<std::string, double>> extra = {}) {
  rdchain::write_trials_csv(out.path("trials.csv"), run.trials);
  rdchain::write_report_csv(out.path("report.csv"), run.report);
  std::vector<std::pair<std::string, double>> fit{{"slope", run.report.slope},
                                                  {"intercept", run.report.intercept},
                                                  {"ci_low", run.report.ci_low},
                                                  {"ci_high", run.report.ci_high},
                                                  {"target", run.report.target},
                                                  {"heuristic", run.heuristic ? 1.0 : 0.0}};
  fit.insert(fit.end(), extra.begin(), extra.end());
  out.named_values("fit.csv", fit);
  std::printf("slope %.4f (95%% CI %.4f..%.4f), target %.4f%s\n", run.report.slope, run.report.ci_low,
              run.report.ci_high, run.report.target, run.heuristic ? " [heuristic ERM]" : "");
}

void run_experiment(const Config& cfg, Output& out) {
  const json& p = cfg.params;
  const std::string& e = cfg.experiment;
  if (e == "constants") {
    const auto c = rdchain::lower_constant();
    const auto m = rdchain::majorizing_constant();
    out.named_values("constants.csv", {{"c", c.value}, {"tau_star", c.argmax}, {"c_bar", m.value}, {"a_star", m.argmax}});
    std::printf("c = %.10f at tau = %.8f\nc_bar = %.10f at a = %.8f\n", c.value, c.argmax, m.value, m.argmax);
  } else if (e == "rd_curve") {
    const json& pts = p["points"];
    const bool nested = pts.front().is_array();
    Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), nested ? static_cast<Eigen::Index>(pts.front().size()) : 1);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (Eigen::Index j = 0; j < X.cols(); ++j)
        X(static_cast<Eigen::Index>(i), j) = nested ? pts[i][static_cast<std::size_t>(j)].get<double>() : pts[i].get<double>();
    std::vector<double> w = p["weights"].get<std::vector<double>>();
    if (w.empty()) w.assign(pts.size(), 1.0);
    const auto mu = rdchain::make_distribution(rdchain::share(rdchain::FiniteMetricSpace::from_points(X)), w);
    const double tol = p["tolerance"].get<double>();
    const auto curve = rdchain::rd_curve(
        mu, rdchain::default_sigma_grid(rdchain::sigma_m(mu), p["grid_points"].get<std::size_t>()), tol);
    {
      auto f = out.open("rd_curve.csv");
      rdchain::write_curve_csv(f, curve);
    }
    const double I = rdchain::rd_integral(curve);
    std::vector<std::pair<std::string, double>> summary{{"sigma_m", curve.sigma_m},
                                                        {"entropy", curve.entropy},
                                                        {"rd_integral", I},
                                                        {"convex_ok", curve.convex_ok ? 1.0 : 0.0}};
    if (p["penalized"].get<bool>()) summary.emplace_back("penalized_integral", rdchain::penalized_rd_integral(mu));
    out.named_values("rd_summary.csv", summary);
    std::printf("sigma_m %.6g, rate-distortion integral %.8g\n", curve.sigma_m, I);
  } else if (e == "sandwich") {
    rdchain::RngStream rng(cfg.seed, rdchain::fnv1a64("sandwich"));
    auto f = out.open("sandwich.csv");
    f << "instance,points,rd_integral,width,width_se,lower,upper,sup_mean,sup_se,pass\n";
    const auto instances = p["instances"].get<int>();
    int passed = 0;
    for (int k = 0; k < instances; ++k) {
      const std::size_t count = 2 + rng.uniform_index(p["max_points"].get<std::size_t>() - 1);
      const auto dim = p["dim"].get<Eigen::Index>();
      Eigen::MatrixXd X(static_cast<Eigen::Index>(count), dim);
      for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < dim; ++j) X(i, j) = rng.normal();
      std::vector<double> w(count);
      for (auto& x : w) x = rng.uniform_open();
      const rdchain::LinearProcessSpec process(X);
      const auto mu = rdchain::make_distribution(rdchain::share(process.metric_space()), w);
      const auto s = rdchain::sandwich_check(process, mu, p["pairs"].get<std::size_t>(), rng,
                                             p["bootstrap"].get<std::size_t>(), cfg.threads);
      const auto sup = rdchain::mc_sup(process, p["mc_samples"].get<std::size_t>(), rng, cfg.threads);
      passed += s.pass() ? 1 : 0;
      f << k << ',' << count << ',' << rdchain::format_double(s.rd_integral) << ',' << rdchain::format_double(s.width)
        << ',' << rdchain::format_double(s.width_se) << ',' << rdchain::format_double(s.lower) << ','
        << rdchain::format_double(s.upper) << ',' << rdchain::format_double(sup.value) << ','
        << rdchain::format_double(sup.std_error) << ',' << (s.pass() ? 1 : 0) << '\n';
    }
    std::printf("%d of %d instances inside the sandwich\n", passed, instances);
  } else if (e == "erm_toy") {
    rdchain::ToyConfig c;
    c.ns = sizes(p["n_grid"]);
    c.replicas = p["replicas"].get<std::size_t>();
    c.truth = p["truth"].get<double>();
    c.noise = rdchain::parse_noise_kind(p["noise_kind"].get<std::string>());
    c.seed = cfg.seed;
    c.threads = cfg.threads;
    write_erm(out, rdchain::run_toy(c));
  } else if (e == "erm_ellipsoid") {
    rdchain::EllipsoidConfig c;
    c.beta = p["beta"].get<double>();
    c.ns = sizes(p["n_grid"]);
    c.replicas = p["replicas"].get<std::size_t>();
    c.noise = rdchain::parse_noise_kind(p["noise_kind"].get<std::string>());
    if (p["map"].get<std::string>() == "soft_clip") c.map = rdchain::LipschitzMap::soft_clip(p["kappa"].get<double>());
    c.truth = p["truth"].get<std::string>();
    c.truncation = p["truncation"].get<std::size_t>();
    c.seed = cfg.seed;
    c.threads = cfg.threads;
    const auto run = rdchain::run_ellipsoid(c);
    write_erm(out, run, {{"max_truncation_tail", run.max_truncation_tail}});
  } else if (e == "erm_sparse") {
    rdchain::SparseConfig c;
    c.q = p["q"].get<double>();
    c.r = p["r"].get<double>();
    c.d = p["d"].get<std::size_t>();
    c.ns = sizes(p["n_grid"]);
    c.replicas = p["replicas"].get<std::size_t>();
    c.design = rdchain::parse_design_kind(p["design"].get<std::string>());
    c.truth = p["truth"].get<std::string>();
    c.noise = rdchain::parse_noise_kind(p["noise_kind"].get<std::string>());
    c.seed = cfg.seed;
    c.threads = cfg.threads;
    const auto run = rdchain::run_sparse(c);
    const auto env = rdchain::sparse_envelope(run.report, c.q, c.r, c.d);
    write_erm(out, run, {{"envelope_C", env.C}, {"envelope_holds", env.holds ? 1.0 : 0.0}});
  } else if (e == "quantizer") {
    const rdchain::WeakLqSpec spec(p["q"].get<double>(), p["r"].get<double>(), p["d"].get<std::size_t>());
    rdchain::RngStream rng(cfg.seed, rdchain::fnv1a64("quantizer"));
    const Eigen::MatrixXd Z = rdchain::sample_weak_lq(spec, p["samples"].get<std::size_t>(), rng);
    std::vector<double> bs = p["b_grid"].get<std::vector<double>>();
    if (bs.empty()) {
      const double l1 = Z.cwiseAbs().rowwise().sum().mean();
      for (int k = 0; k < 8; ++k) bs.push_back(l1 * std::pow(2.0, -3.0 + 0.5 * k));
    }
    auto f = out.open("quantizer.csv");
    f << "b,mean_abs_gap,se,entropy\n";
    for (const double b : bs) {
      const auto r = rdchain::quantize_weak_lq(Z, spec.q, spec.r, b);
      f << rdchain::format_double(b) << ',' << rdchain::format_double(r.mean_abs_gap) << ','
        << rdchain::format_double(r.gap_se) << ',' << rdchain::format_double(r.entropy) << '\n';
    }
  } else if (e == "tail") {
    const double beta = p["beta"].get<double>();
    const auto n = p["n"].get<std::size_t>();
    const auto replicas = p["replicas"].get<std::size_t>();
    const double lambda = static_cast<double>(n) / p["lambda_divisor"].get<double>();
    const auto variant = p["variant"].get<std::string>() == "subgaussian" ? rdchain::TailVariant::Subgaussian
                                                                           : rdchain::TailVariant::LogSobolev;
    const rdchain::TailConstants k{p["C"].get<double>(), p["K_prime"].get<double>()};
    const double psi = rdchain::psi_bound(lambda, static_cast<double>(n), rdchain::ellipsoid_G(beta), variant, k);
    const double t0 = rdchain::tail_threshold(psi, lambda, 0.05);
    const auto E = rdchain::sobolev_ellipsoid(beta, rdchain::default_truncation(beta, n));
    const Eigen::VectorXd m = rdchain::ellipsoid_truth(E, "half");
    const auto trials = rdchain::parallel_map<rdchain::TrialRow>(
        replicas,
        [&](std::size_t r) {
          const std::uint64_t s = rdchain::trial_seed(cfg.seed, "tail", r);
          rdchain::RngStream rng(s, 0);
          const auto t = rdchain::erm_mean_trial(E, rdchain::LipschitzMap::identity(), m, n,
                                                 rdchain::NoiseKind::Gaussian, rng);
          return rdchain::TrialRow{n, r, s, t.squared_error, t.generalization_term, false};
        },
        cfg.threads);
    double top = -INFINITY;
    for (const auto& t : trials) top = std::max(top, lambda * t.squared_error);
    double acc = 0.0;
    std::size_t exceed = 0;
    for (const auto& t : trials) {
      acc += std::exp(lambda * t.squared_error - top);
      exceed += std::sqrt(t.squared_error) > t0 ? 1 : 0;
    }
    const double log_mgf = top + std::log(acc / static_cast<double>(replicas));
    rdchain::write_trials_csv(out.path("trials.csv"), trials);
    out.named_values("tail.csv", {{"lambda", lambda},
                                  {"psi_bound", psi},
                                  {"empirical_log_mgf", log_mgf},
                                  {"t0", t0},
                                  {"empirical_exceedance", static_cast<double>(exceed) / static_cast<double>(replicas)}});
    std::printf("psi bound %.4f, empirical ln E exp %.4f\n", psi, log_mgf);
  }
}

int do_run(Config cfg, const std::optional<std::uint64_t>& seed, const std::optional<std::string>& out_dir,
           const std::optional<std::size_t>& threads) {
  if (seed) cfg.seed = *seed;
  if (out_dir) cfg.out = *out_dir;
  if (threads) cfg.threads = *threads;
  rdchain::set_default_threads(cfg.threads);

  json echo;
  echo["experiment"] = cfg.experiment;
  echo["seed"] = cfg.seed;
  for (const auto& [k, v] : cfg.params.items()) echo[k] = v;
  const std::string canonical = echo.dump();

  const auto start = std::chrono::steady_clock::now();
  Output out{fs::path(cfg.out)};
  run_experiment(cfg, out);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest;
  manifest["experiment"] = cfg.experiment;
  manifest["config"] = echo;
  manifest["config_hash"] = hex64(rdchain::fnv1a64(canonical));
  manifest["library_version"] = RDCHAIN_VERSION;
  manifest["files"] = out.files();
  manifest["wall_time_s"] = wall;
  std::ofstream(out.dir() / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
  std::printf("wrote %zu files to %s\n", out.files().size() + 1, out.dir().string().c_str());
  return 0;
}

int do_verify(const std::string& suite, std::uint64_t seed, std::size_t threads, const std::string& golden) {
  rdchain::acceptance::Options o;
  o.seed = seed;
  o.threads = threads;
  o.fast = suite == "fast";
  std::vector<std::string> failed;
  for (const auto& g : rdchain::acceptance::check_golden(golden)) {
    std::printf("%-40s %s  %s\n", g.name.c_str(), g.pass ? "PASS" : "FAIL", g.detail.c_str());
    if (!g.pass) failed.push_back(g.name);
  }
  for (const auto& r : rdchain::acceptance::run(o)) {
    std::printf("%s\n", rdchain::acceptance::format_line(r).c_str());
    if (!r.pass) failed.push_back("criterion " + std::to_string(r.id));
  }
  if (failed.empty()) {
    std::printf("verify %s: all pass\n", suite.c_str());
    return 0;
  }
  std::string list;
  for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
  std::printf("verify %s: FAILED: %s\n", suite.c_str(), list.c_str());
  return kExitRuntime;
}

int do_emit_plotdata(const std::string& report, std::optional<std::string> out) {
  std::vector<rdchain::ReportRow> rows;
  try {
    rows = rdchain::read_report_csv(report);
  } catch (const rdchain::Error& e) {
    throw ConfigError(e.what());
  }
  if (rows.size() < 2) throw ConfigError(report + ": need at least two rows to fit a line");
  std::string base = out ? *out : report;
  if (!out && base.size() > 4 && base.substr(base.size() - 4) == ".csv") base.resize(base.size() - 4);
  std::vector<double> lx;
  std::vector<double> ly;
  {
    std::ofstream dat(base + ".dat", std::ios::binary);
    dat << "# ln_n ln_mse\n";
    for (const auto& r : rows) {
      lx.push_back(std::log(static_cast<double>(r.n)));
      ly.push_back(std::log(r.mean_mse));
      dat << rdchain::format_double(lx.back()) << ' ' << rdchain::format_double(ly.back()) << '\n';
    }
  }
  const auto fit = rdchain::ols(lx, ly);
  std::ofstream(base + ".fit", std::ios::binary) << "# slope intercept\n"
                                                 << rdchain::format_double(fit.slope) << ' '
                                                 << rdchain::format_double(fit.intercept) << '\n';
  std::printf("wrote %s.dat and %s.fit (slope %.6f)\n", base.c_str(), base.c_str(), fit.slope);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-distortion chaining toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RDCHAIN_VERSION);

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "base seed (overrides the config)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "worker threads, 0 = logical cores");
  };

  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("--config", config_path, "JSON config")->required();
  add_common(run);

  std::string suite = "fast";
  std::string golden = RDCHAIN_GOLDEN_DIR;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--golden", golden, "directory with frozen reference files");
  add_common(verify);

  std::string report;
  auto* plot = app.add_subcommand("emit-plotdata", "turn a report CSV into plot-ready columns");
  plot->add_option("report", report, "report CSV (n,mean_mse,se,replicas)")->required();
  plot->add_option("--out", out, "output path without extension");

  const std::map<std::string, std::string> shortcuts{{"constants", "constants"},
                                                     {"rd-curve", "rd_curve"},
                                                     {"erm-ellipsoid", "erm_ellipsoid"},
                                                     {"erm-sparse", "erm_sparse"},
                                                     {"sandwich", "sandwich"}};
  std::map<CLI::App*, std::string> shortcut_apps;
  for (const auto& [name, experiment] : shortcuts) {
    auto* sub = app.add_subcommand(name, "run the " + experiment + " experiment (config optional)");
    sub->add_option("--config", config_path, "JSON config");
    add_common(sub);
    shortcut_apps[sub] = experiment;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) {
      const std::string text = read_file(*config_path);
      return do_run(parse_config(text, *config_path, ""), seed, out, threads);
    }
    if (verify->parsed()) return do_verify(suite, seed.value_or(1), threads.value_or(0), golden);
    if (plot->parsed()) return do_emit_plotdata(report, out);
    for (const auto& [sub, experiment] : shortcut_apps) {
      if (!sub->parsed()) continue;
      const std::string text = config_path ? read_file(*config_path) : "{}";
      return do_run(parse_config(text, config_path.value_or("<defaults>"), experiment), seed,
                    out ? out : std::optional<std::string>(config_path ? std::nullopt : std::optional<std::string>(experiment)),
                    threads);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
