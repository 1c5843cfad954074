#pragma once

#include "dualrail/params.hpp"

#include <string>
#include <vector>

namespace dualrail {
namespace validate {

// One acceptance criterion: a short name, the verdict, and a detail string
// carrying every measured value next to its reference band so failures can
// be read without rerunning anything.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Scorecard {
  std::vector<CriterionResult> criteria;

  bool all_pass() const;
  int n_pass() const;
};

// Runs the full acceptance suite: quantitative reproductions against the
// reference values baked in below, the single-fault erasure property, the
// always-on model invariants, sampling agreement and the zero-error limit.
// `hp` carries the reference hardware parameters, `ideal` the noiseless set.
// Each criterion is evaluated independently; an exception inside one is
// recorded as a failure of that criterion only.
Scorecard validate_all(const HardwareParams& hp, const HardwareParams& ideal);

std::string format_scorecard(const Scorecard& card);

}  // namespace validate
}  // namespace dualrail
