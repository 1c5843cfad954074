#pragma once

#include "dualrail/params.hpp"

#include <string>
#include <vector>

namespace dualrail {
namespace budget {

// Which time windows the closed-form rows integrate over. Printed keeps the
// compact textbook windows (full check wall approximated by t_M, half pulse
// windows). ScheduleMatched uses the end-aligned schedule the simulator
// actually runs, including the ambient wait of the faster readout and the
// full check wall; use it when comparing rows against simulated outcomes.
enum class WindowConvention { Printed, ScheduleMatched };

// How an exposure window converts to a transition probability. Linear keeps
// the t/T1 forms the tables are built from; Exponential switches every such
// row to 1 - e^{-t/T1} (scaled by n_th for heating rows) for sensitivity
// checks against the small-rate approximation.
enum class RateForm { Linear, Exponential };

struct ErrorTerm {
  std::string label;
  double value = 0.0;
};

// First-order decomposition of a single-cavity assignment error
// probability: p("0" | photon loaded) or p("1" | vacuum loaded).
struct AssignmentBudget {
  Subsystem subsystem = Subsystem::Bob;
  bool photon = false;       // true: p("0"||1>), false: p("1"||0>)
  bool include_prep = true;  // false drops the state-prep row
  WindowConvention convention = WindowConvention::Printed;
  std::vector<ErrorTerm> terms;

  double total() const;
  double relative(std::size_t i) const;  // terms[i].value / total()
};

AssignmentBudget assignment_budget(const HardwareParams& hp, Subsystem s,
                                   bool photon, bool include_prep = true,
                                   WindowConvention convention =
                                       WindowConvention::Printed,
                                   RateForm rate_form = RateForm::Linear);

// total() of the corresponding budget
double assignment_probability(const HardwareParams& hp, Subsystem s,
                              bool photon, bool include_prep = true,
                              WindowConvention convention =
                                  WindowConvention::Printed,
                              RateForm rate_form = RateForm::Linear);

// Closed-form state preparation error estimates for one subsystem.
// eps_reset is the residual photon population after the measurement-based
// reset to vacuum (six consecutive confirmations); the check values cover
// the transmon-check-only protocol and the cm values the variant with five
// additional cavity check measurements.
struct PrepErrorEstimates {
  double eps_reset = 0.0;
  double eps0_check = 0.0;
  double eps1_check = 0.0;
  double eps0_cm = 0.0;
  double eps1_cm = 0.0;
  // check-only error relative to an undetected transition during the last
  // cavity measurement; > 1 means repeated cavity checks help
  double ratio0 = 0.0;
  double ratio1 = 0.0;
};

PrepErrorEstimates prep_error_estimates(const HardwareParams& hp, Subsystem s);

// failure probability of the joint reset of both cavities to vacuum
double eps00(const HardwareParams& hp);

// number of confirmations used by the measurement-based reset
inline constexpr int kResetConfirmations = 6;
// number of cavity check measurements in the extended prep protocol
inline constexpr int kCavityChecks = 5;

// Analytic 4x4 logical SPAM matrix built as the product of the two
// per-subsystem assignment probabilities. p[r][c] = P(read r | loaded c)
// with the two-bit labels ordered 00, 01, 10, 11 (Bob digit first).
struct SpamMatrixAnalytic {
  double p[4][4] = {};
  bool include_prep = true;
  WindowConvention convention = WindowConvention::Printed;

  // deviation of column c from unit total; identically zero here because
  // each per-subsystem pair (p_keep, p_flip) is built as (1 - p_flip, p_flip)
  double column_residual(int c) const;
};

SpamMatrixAnalytic spam_matrix(const HardwareParams& hp,
                               bool include_prep = true,
                               WindowConvention convention =
                                   WindowConvention::Printed);

// Aligned text table of one budget: mechanism, raw probability, relative
// share. Suitable for terminal output and diffable logs.
std::string format_budget_table(const AssignmentBudget& b);

}  // namespace budget
}  // namespace dualrail
