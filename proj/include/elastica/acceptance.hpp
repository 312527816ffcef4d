#pragma once

#include <string>
#include <vector>

// Acceptance checks shared by the acceptance test binary and `elastica verify`.

namespace elastica::acceptance {

struct Outcome {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured values, one line
  double seconds = 0.0;
};

// 1..12.
std::vector<int> all_ids();

// Runs one criterion. Exceptions are caught and reported as failures.
Outcome run(int id);

std::vector<Outcome> run_all(const std::vector<int>& ids);

// "PASS [7] title: detail (1.23 s)"
std::string format(const Outcome& outcome);

}  // namespace elastica::acceptance
