#include "rdchain/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "rdchain/csv.hpp"
#include "rdchain/error.hpp"
#include "rdchain/monte_carlo.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

ErmReport rate_fit(const std::vector<GridPoint>& grid, double target, std::size_t resamples, std::uint64_t seed) {
  std::set<std::size_t> distinct;
  for (const auto& g : grid) {
    if (g.n == 0) fail(ErrorKind::InsufficientGrid, "n must be positive");
    if (g.errors.size() < 10) fail(ErrorKind::InsufficientGrid, "need at least 10 replicas per n");
    distinct.insert(g.n);
  }
  if (distinct.size() < 4 || distinct.size() != grid.size())
    fail(ErrorKind::InsufficientGrid, "need at least 4 distinct n values");

  ErmReport rep;
  rep.target = target;
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& g : grid) {
    const MeanSe m = mean_se(g.errors);
    if (!(m.mean > 0.0)) fail(ErrorKind::InsufficientGrid, "mean error must be positive for a log-log fit");
    rep.rows.push_back({g.n, m.mean, m.se, g.errors.size()});
    lx.push_back(std::log(static_cast<double>(g.n)));
    ly.push_back(std::log(m.mean));
  }
  const LineFit f = ols(lx, ly);
  rep.slope = f.slope;
  rep.intercept = f.intercept;

  RngStream rng(seed, 0x726174ULL);
  std::vector<double> slopes;
  slopes.reserve(resamples);
  // Replicas share draws across n, so with equal counts a resample keeps whole
  // replicas (one index set for every n).
  bool paired = true;
  for (const auto& g : grid) paired = paired && g.errors.size() == grid.front().errors.size();
  std::vector<double> by(grid.size());
  std::vector<std::size_t> pick;
  for (std::size_t b = 0; b < resamples; ++b) {
    if (paired) {
      pick.resize(grid.front().errors.size());
      for (auto& i : pick) i = rng.uniform_index(pick.size());
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& e = grid[k].errors;
      double s = 0.0;
      for (std::size_t i = 0; i < e.size(); ++i) s += e[paired ? pick[i] : rng.uniform_index(e.size())];
      by[k] = std::log(std::max(s / static_cast<double>(e.size()), 1e-300));
    }
    slopes.push_back(ols(lx, by).slope);
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    auto q = [&](double p) {
      const double pos = p * static_cast<double>(slopes.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      return i + 1 < slopes.size() ? slopes[i] * (1 - frac) + slopes[i + 1] * frac : slopes[i];
    };
    rep.ci_low = q(0.025);
    rep.ci_high = q(0.975);
  } else {
    rep.ci_low = rep.ci_high = rep.slope;
  }
  return rep;
}

void write_report_csv(const std::string& path, const ErmReport& report) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << "n,mean_mse,se,replicas\n";
  for (const auto& r : report.rows)
    out << r.n << ',' << format_double(r.mean_mse) << ',' << format_double(r.se) << ',' << r.replicas << '\n';
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::InvalidArgument, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,mean_mse,se,replicas") fail(ErrorKind::InvalidArgument, path + ":1: unexpected header '" + line + "'");
  std::vector<ReportRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) fail(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected 4 fields");
    try {
      ReportRow r;
      std::size_t used = 0;
      r.n = std::stoul(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("n");
      r.mean_mse = std::stod(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument("mean_mse");
      r.se = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("se");
      r.replicas = std::stoul(cells[3], &used);
      if (used != cells[3].size()) throw std::invalid_argument("replicas");
      if (r.n == 0 || !(r.mean_mse > 0.0)) throw std::invalid_argument("range");
      rows.push_back(r);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": malformed row '" + line + "'");
    }
  }
  if (rows.empty()) fail(ErrorKind::InvalidArgument, path + ": no data rows");
  return rows;
}

}  // namespace rdchain
