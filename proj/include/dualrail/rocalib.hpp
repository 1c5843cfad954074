#pragma once

#include "dualrail/params.hpp"

#include <cstdint>

namespace dualrail {

// Repeated-readout calibration of one transmon: initialize in |g>, measure
// many times in a row, and separate misassignments (isolated single-flip
// outcomes) from real transitions (changes that persist) by filtering the
// records.
struct RoCalibConfig {
  Subsystem subsystem = Subsystem::Alice;
  int records = 100000;
  int measurements_per_record = 10;
  std::uint64_t seed = 1;
};

struct RoCalibResult {
  // misassignment estimates from isolated flips between agreeing neighbors
  double p_ge_hat = 0.0;  // P(report E | g)
  double p_ge_sigma = 0.0;
  double p_eg_hat = 0.0;  // P(report G | e)
  double p_eg_sigma = 0.0;
  std::int64_t n_g_windows = 0;  // neighbor pairs agreeing on G
  std::int64_t n_e_windows = 0;

  // lifetime consistency diagnostic: persistent-change rate in the records
  // against the rate predicted from the readout and idle relaxation model
  double measured_transition_rate = 0.0;
  double predicted_transition_rate = 0.0;
  double consistency_ratio = 0.0;  // measured / predicted
};

RoCalibResult run_ro_calib(const HardwareParams& hp,
                           const RoCalibConfig& cfg);

}  // namespace dualrail
