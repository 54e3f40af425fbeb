// One line per acceptance criterion, default configuration. Exit 0 iff all pass.
// An optional argument names a file for the full JSON report.

#include <chrono>
#include <cstdio>
#include <fstream>

#include "gcalc/suites.hpp"

int main(int argc, char** argv) {
  const gcalc::Config cfg;
  gcalc::SuiteReport rep;
  rep.suite = "acceptance";
  int n = 0;
  for (const auto& id : gcalc::acceptance_check_ids()) {
    const auto t0 = std::chrono::steady_clock::now();
    rep.checks.push_back(gcalc::run_check(id, cfg));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%2d] %s  (%.1fs)\n", ++n, rep.checks.back().summary_line().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("acceptance: %s\n", rep.passed() ? "PASS" : "FAIL");
  if (argc > 1) std::ofstream(argv[1]) << rep.to_json().dump(2) << '\n';
  return rep.passed() ? 0 : 1;
}
