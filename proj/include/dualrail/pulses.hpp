#pragma once

#include "dualrail/layout.hpp"
#include "dualrail/params.hpp"

namespace dualrail {

// Transmon pi-pulse errors used by the mapping and reset channels:
//   p_us  unwanted flip of the photon-number component the selective mapping
//         pulse is detuned from (detuning = chi)
//   p_s   missed flip of the detuned component under the short unselective
//         reset pulse (its residual selectivity)
struct PulseErrors {
  double p_us = 0.0;
  double p_s = 0.0;
};

// Excited-state population after a resonant-area-pi Gaussian pulse (4 sigma
// total window) applied at the given detuning to a transmon starting in g.
// At zero detuning this is exactly 1.
double gaussian_pi_pulse_flip(double sigma_us, double detuning_mhz);

// Propagator of a number-selective transmon drive over the cavity-transmon
// pair, embedded in the full register. The envelope is a lifted truncated
// Gaussian of the given sigma over a chop*sigma window, area-calibrated so
// amplitude = 1 produces a pi rotation on resonance. Within the cavity Fock-n
// block the drive is detuned by (chi*n - detuning) MHz, so detuning = chi is
// resonant for n = 1 and detuning = 0 for n = 0. Free dispersive phases are
// removed, so amplitude = 0 yields the identity.
Matrix gaussian_pulse_propagate(const SpaceLayout& space, Mode transmon, double sigma_us,
                                int chop, double detuning_mhz, double chi_mhz,
                                double amplitude);

// computes (and caches) the two pulse errors for a subsystem, honoring the
// overrides when present
PulseErrors pulse_errors(const SubsystemParams& p);

// same, addressed by subsystem tag
PulseErrors pulse_selectivity_errors(const HardwareParams& hp, Subsystem s);

}  // namespace dualrail
