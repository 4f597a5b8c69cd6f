#ifndef TORSIONLAB_VERIFY_HPP
#define TORSIONLAB_VERIFY_HPP

#include <string>
#include <vector>

// End-to-end verification suite: one entry per acceptance check, shared by
// the CLI `verify` subcommand and the acceptance test binary.

namespace torsionlab::verify {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

CriterionResult run_criterion(int index);  // 1..11; throws on unknown index
std::vector<CriterionResult> run_all();

}  // namespace torsionlab::verify

#endif
