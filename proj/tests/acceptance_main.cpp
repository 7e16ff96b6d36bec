// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <cstdio>

#include "burgers/verification.hpp"

int main() {
  bool all = true;
  burgers::run_acceptance([&](const burgers::CriterionResult& r) {
    std::printf("[%s] %-28s residual %-12.4g %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.residual, r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  });
  std::printf("%s\n", all ? "acceptance: all criteria passed"
                          : "acceptance: one or more criteria FAILED");
  return all ? 0 : 1;
}
