// One PASS/FAIL line per acceptance criterion. `--quick` skips the checks
// that take minutes; `--only ID` runs a single criterion.
#include <cstdio>
#include <cstring>
#include <string>

#include "mecbf/verify.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
  }
  int failed = 0;
  for (const mecbf::Check& c : mecbf::acceptance_checks()) {
    if (!only.empty() && c.id != only) continue;
    if (quick && c.heavy) {
      std::printf("SKIP [%s] %s\n", c.id.c_str(), c.title.c_str());
      continue;
    }
    const mecbf::CheckResult r = mecbf::run_check(c);
    std::printf("%s\n", mecbf::format_result(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
