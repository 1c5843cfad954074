#pragma once

#include "dualrail/branch.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dualrail {

// Shot classification, in decreasing precedence for the fail classes:
// FPC (failed prep check, shot discarded), FMC (failed measurement check),
// FA (failed agreement between rounds), then the four assignment strings
// written as [Bob digit][Alice digit] with 1 = photon detected.
enum class DecodedClass { FPC, FMC, FA, S00, S01, S10, S11 };

enum class LogicalOutcome { Zero, One, Erasure, Discarded };

const char* class_label(DecodedClass c);
const char* logical_label(LogicalOutcome o);
LogicalOutcome logical_of(DecodedClass c);

struct DecodedShot {
  DecodedClass cls;
  LogicalOutcome logical;
};

// What the decoder needs to know about the schedule that produced a shot:
// how many measurement rounds, and the expected outcome of every
// prep-stage check step (mismatch anywhere flags FPC).
struct DecodePlan {
  int rounds = 1;
  std::map<std::string, char> prep_expected;  // step label -> 'G' or 'E'
};

// Pure function of the record; permutation invariant in the record order.
// Precedence: prep-check mismatch -> FPC; post-reset check 'E' -> FMC;
// otherwise majority vote over the per-round strings (N=1 direct, N=2
// agreement, N>=3 strict majority; anything unresolved -> FA).
DecodedShot decode_shot(const std::vector<OutcomeRecord>& records,
                        const DecodePlan& plan);

// Tally of decoded shots.  Counts are doubles so the same structure works
// for sampled counts and for exact probability masses.
struct Metrics {
  double n_fpc = 0.0;
  double n_fmc = 0.0;
  double n_fa = 0.0;
  double n_00 = 0.0;
  double n_01 = 0.0;
  double n_10 = 0.0;
  double n_11 = 0.0;

  double n_all() const;
  double n_t() const { return n_all() - n_fpc; }  // shots that pass prep

  void add(DecodedClass c, double weight = 1.0);
  void merge(const Metrics& other);

  // fraction of logical assignments that landed on the wrong state, given
  // the prepared logical value
  double misassignment_error(LogicalOutcome prepared) const;
  // (FMC + 00 + 11 + FA) / N_T
  double erasure_fraction() const;
  // logical assignments given a leaked prep: (N_01 + N_10) / N_T
  double leakage_detection_error() const;
};

// binomial standard error sqrt(p(1-p)/n); zero when n <= 0
double binomial_sigma(double p, double n);

// CSV round trip.  Shot files: one row per outcome record,
// "shot_id, step_label, subsystem, outcome".  Decoded files: one row per
// shot, "shot_id, class, logical".  Lines starting with '#' are comments.
void write_shot_csv(const std::string& path,
                    const std::vector<std::vector<OutcomeRecord>>& shots);
std::vector<std::vector<OutcomeRecord>> read_shot_csv(const std::string& path);
void write_decoded_csv(const std::string& path,
                       const std::vector<DecodedShot>& shots);

}  // namespace dualrail
