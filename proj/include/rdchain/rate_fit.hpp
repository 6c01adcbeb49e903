#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rdchain {

struct GridPoint {
  std::size_t n = 0;
  std::vector<double> errors;  // one per replica
};

struct ReportRow {
  std::size_t n = 0;
  double mean_mse = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;
};

struct ErmReport {
  std::vector<ReportRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;   // 2.5% bootstrap quantile
  double ci_high = 0.0;  // 97.5%
  double target = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

/// OLS of ln(mean error) on ln n with a replica-level bootstrap. Whole replicas
/// are resampled when every n has the same count, otherwise each n separately.
/// Needs 4 distinct n and 10 replicas each.
ErmReport rate_fit(const std::vector<GridPoint>& grid, double target = 0.0, std::size_t resamples = 1000,
                   std::uint64_t seed = 1);

void write_report_csv(const std::string& path, const ErmReport& report);
/// Reads n,mean_mse,se,replicas; InvalidArgument on malformed input.
std::vector<ReportRow> read_report_csv(const std::string& path);

}  // namespace rdchain
