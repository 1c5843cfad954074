#pragma once

#include "dualrail/fits.hpp"
#include "dualrail/protocols.hpp"

#include <vector>

namespace dualrail {

// Logical Ramsey / echo experiment: prepare |0_L>, split with a pi/2
// beamsplitter pulse, idle with the cavity-pair detuning and a dephasing
// rate, optionally refocus with a logical pi halfway, close with a second
// pi/2 of swept phase, then run one logical measurement round.
struct RamseyConfig {
  double detuning_mhz = 0.005;  // intentional beamsplitter detuning (5 kHz)
  double gamma_phi_per_us = 0.0;
  bool echo = false;
  double second_pulse_phase = 0.0;
  int rounds = 1;
};

struct RamseyPoint {
  double delay_us = 0.0;
  double phase = 0.0;
  double z_logical = 0.0;  // (n_10 - n_01)/(n_10 + n_01), +1 <-> |10>
  double erasure_fraction = 0.0;
  double pruned_mass = 0.0;
  Metrics metrics;
};

RamseyPoint run_ramsey_point(const ProtocolEngine& eng, double delay_us,
                             const RamseyConfig& cfg);

// Phase-swept contrast at one delay: fit z(phase) to a sinusoid and report
// its amplitude.
struct ContrastPoint {
  double delay_us = 0.0;
  double contrast = 0.0;
  double offset = 0.0;
};

ContrastPoint phase_sweep_contrast(const ProtocolEngine& eng, double delay_us,
                                   const std::vector<double>& phases,
                                   const RamseyConfig& cfg);

// Full short-time dephasing extraction: contrast per delay, phase-flip
// probability p_phi(t) = (1 - C(t)/C(0))/2, and a weighted linear fit whose
// slope estimates gamma_phi/2.
struct DephasingResult {
  std::vector<ContrastPoint> contrasts;
  double contrast_at_zero = 0.0;
  std::vector<double> p_phi;
  fits::LinearFit fit;  // p_phi vs delay
};

DephasingResult extract_dephasing(const ProtocolEngine& eng,
                                  const std::vector<double>& delays_us,
                                  const std::vector<double>& phases,
                                  const RamseyConfig& cfg);

}  // namespace dualrail
