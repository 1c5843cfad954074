#pragma once

#include "dualrail/layout.hpp"

#include <optional>
#include <string>

namespace dualrail {

// All times in microseconds, frequencies in MHz unless the name says
// otherwise. chi_cc, self_kerr, alpha and the mode frequencies are carried
// for completeness and validated, but generate no dynamics at the truncation
// used here.
struct SubsystemParams {
  // storage cavity
  double chi_cm_mhz = 0.0;    // cavity-transmon dispersive shift, signed
  double chi_cc_khz = 0.0;    // cavity-cavity cross-Kerr
  double t1c_us = 0.0;
  double t2rc_us = 0.0;       // cavity Ramsey T2
  double t2ec_us = 0.0;       // cavity echo T2
  double nth_c = 0.0;
  double self_kerr_khz = 0.0;
  double omega_c_ghz = 0.0;
  // transmon ancilla
  double t1t_us = 0.0;
  double t2rt_us = 0.0;
  double t2et_us = 0.0;
  double nth_t = 0.0;
  double alpha_mhz = 0.0;
  double omega_t_ghz = 0.0;
  // pulses: selective (mapping) and unselective (reset) Gaussian sigmas
  double sigma_s_ns = 0.0;
  double sigma_us_ns = 0.0;
  // readout chain
  double t_m_us = 0.0;        // transmon measurement duration
  double t_d_us = 0.0;        // post-readout delay
  double t1_ro_us = 0.0;      // transmon T1 while the readout drive is on
  double nth_ro = 0.0;        // transmon excited-state occupation under the drive
  double p_ge = 0.0;          // P(assigned E | transmon in g)
  double p_eg = 0.0;          // P(assigned G | transmon in e)
  double eps_ocp = 0.0;       // residual |0> population after optimal-control loading
  // optional bypass of the pulse-level error computation
  std::optional<double> p_us_override;
  std::optional<double> p_s_override;

  // Gaussian pulses are chopped to a 4 sigma total window
  double t_map_us() const { return 4.0 * sigma_s_ns * 1e-3; }
  double t_reset_us() const { return 4.0 * sigma_us_ns * 1e-3; }

  // pure dephasing times from the Ramsey T2 and T1
  double tphi_t_us() const;
  double tphi_c_us() const;
};

struct HardwareParams {
  SubsystemParams alice;
  SubsystemParams bob;
  double gamma_phi_ramsey_per_us = 0.0;  // joint cavity-pair dephasing rate
  double gamma_phi_echo_per_us = 0.0;
  double tau_ocp_us = 1.0;               // duration of the optimal-control loading pulse

  const SubsystemParams& sub(Subsystem s) const {
    return s == Subsystem::Bob ? bob : alice;
  }
  SubsystemParams& sub(Subsystem s) { return s == Subsystem::Bob ? bob : alice; }

  // throws std::invalid_argument naming the offending field
  void validate() const;
};

HardwareParams load_params(const std::string& path);

// built-in copy of params/params_paper.json
HardwareParams default_params();

// noiseless configuration: very long lifetimes, zero thermal occupations and
// assignment errors, pulse errors overridden to zero
HardwareParams zero_error_params();

// pure dephasing time from a Ramsey T2 and a T1; +inf when T2 = 2 T1
double pure_dephasing_time(double t2_us, double t1_us);

}  // namespace dualrail
