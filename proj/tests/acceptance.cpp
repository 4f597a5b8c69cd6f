// Runs every acceptance check and prints one pass/fail line per criterion.

#include <cstdio>

#include "torsionlab/verify.hpp"

int main() {
  bool all = true;
  for (int i = 1; i <= 11; ++i) {
    auto r = torsionlab::verify::run_criterion(i);
    std::printf("%s  criterion %2d  %s  [%s]\n", r.pass ? "PASS" : "FAIL", r.index,
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
