// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <cstdio>

#include "elastica/acceptance.hpp"

int main() {
  using namespace elastica::acceptance;
  int failed = 0;
  for (int id : all_ids()) {
    const auto o = run(id);
    std::printf("%s\n", format(o).c_str());
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all_ids().size()) - failed,
              all_ids().size());
  return failed == 0 ? 0 : 1;
}
