#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace procount::verify {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::uint32_t p = 3;
  std::uint32_t depth = 6;
  std::uint32_t width = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// PROCOUNT_THREADS caps worker threads; defaults to 1
unsigned thread_budget();

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  json data;
  double seconds = 0.0;
};

// runs one acceptance criterion (1..10) with its parameters pinned
CriterionResult run_criterion(int id, const RunConfig& config);

// suite name -> criterion ids; known names: algebra, dichotomy, functorF,
// psi, roundtrip, borel, all
std::vector<int> suite_criteria(const std::string& suite);

// deterministic report (no wall-clock content)
json report_json(const RunConfig& config, const std::vector<CriterionResult>& results);

}  // namespace procount::verify
