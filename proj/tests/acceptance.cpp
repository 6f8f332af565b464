// Acceptance suite: runs every criterion at its pinned parameters and
// prints one pass/fail line per criterion. Exit 0 iff all pass.
#include <cstdio>

#include "procount/verify.hpp"

int main() {
  procount::verify::RunConfig config;
  config.threads = procount::verify::thread_budget();
  std::printf("acceptance suite: p=%u seed=%llu threads=%u\n", config.p,
              static_cast<unsigned long long>(config.seed), config.threads);
  bool all = true;
  for (int id = 1; id <= 10; ++id) {
    procount::verify::CriterionResult r = procount::verify::run_criterion(id, config);
    std::printf("[%s] criterion %2d: %s -- %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.summary.c_str(), r.seconds);
    std::fflush(stdout);
    all = all && r.pass;
  }
  std::printf("acceptance suite: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");
  return all ? 0 : 1;
}
