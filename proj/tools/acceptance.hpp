#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rdchain::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  bool fast = false;  // smaller Monte-Carlo sizes for criteria 4 and 11
};

/// Runs criteria in `ids` (all twelve when empty).
std::vector<CriterionResult> run(const Options& options, const std::vector<int>& ids = {});

std::string format_line(const CriterionResult& r);

/// Compares frozen reference files against fresh computations. One result per
/// file; a missing or unreadable file fails and is named in the detail.
std::vector<CriterionResult> check_golden(const std::string& directory);

}  // namespace rdchain::acceptance
