#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  rdchain::acceptance::Options options;
  std::vector<int> ids;
  app.add_option("--seed", options.seed, "base seed");
  app.add_option("--threads", options.threads, "worker threads (0 = all cores)");
  app.add_flag("--fast", options.fast, "reduced Monte-Carlo sizes");
  app.add_option("--only", ids, "criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& r : rdchain::acceptance::run(options, ids)) {
    std::printf("%s\n", rdchain::acceptance::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%s: %d failed\n", failed == 0 ? "ALL PASS" : "FAILURES", failed);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
