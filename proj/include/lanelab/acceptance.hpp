#ifndef LANELAB_ACCEPTANCE_HPP
#define LANELAB_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lanelab {
namespace acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool ran = false;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteResult {
  std::vector<CriterionResult> results;
  bool all_pass = true;  // over the criteria that ran
};

// Runs the acceptance criteria and prints one pass/fail line each.
// quick skips the slower criteria (3, 4, 6, 8), marking them SKIP.
SuiteResult run_suite(bool quick, std::ostream& log);

}  // namespace acceptance
}  // namespace lanelab

#endif
