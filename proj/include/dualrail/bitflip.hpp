#pragma once

#include "dualrail/budget.hpp"
#include "dualrail/params.hpp"

#include <string>

namespace dualrail {
namespace budget {

// Closed-form excited-state population of a two-level cavity relaxing with
// decay rate 1/t1 and heating rate nth/t1 from initial excited population p0:
//   P_e(t) = r_up/r + (p0 - r_up/r) e^{-r t},  r = (1 + nth)/t1
double excited_population(double t_us, double t1_us, double nth, double p0);

// Joint dual-rail populations, Bob digit first: p00 = P(|00>), p01 = P(|01>),
// p10 = P(|10>), p11 = P(|11>). Products of per-cavity solutions, so the
// four entries sum to one exactly.
struct PopulationCurves {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double sum() const { return p00 + p01 + p10 + p11; }
};

// Initial excited-state populations of the two cavities.
struct OdeInit {
  double excited_b = 0.0;
  double excited_a = 0.0;
};

// Initial conditions after state preparation: the vacuum rail starts with
// excited population eps0_check, the photon rail with ground population
// eps1_check. prep_one = false loads |0_L> = |01>, true loads |1_L> = |10>.
OdeInit prep_init(const HardwareParams& hp, bool prep_one);

// zero_cavity_nth freezes the heating channel (decay and the initial
// conditions are kept), which isolates the measurement-induced part of the
// apparent bit-flip signal.
PopulationCurves ode_populations(const HardwareParams& hp, double t_us,
                                 const OdeInit& init,
                                 bool zero_cavity_nth = false);

// What the delay-scan bit-flip curve is allowed to contain.
enum class BitflipMode { IntrinsicOnly, MeasurementOnly, Both };

// Model of the measured logical bit-flip probability after an idle of t_us:
// raw outcome weights m_O(t) = sum_k P_k(t) P(O | k) with measurement-only
// assignment probabilities, conditioned on the logical outcomes,
//   prep |0_L>:  m_10 / (m_01 + m_10),   prep |1_L>:  m_01 / (m_01 + m_10).
// IntrinsicOnly uses ideal assignment, MeasurementOnly freezes heating.
double apparent_bitflip(const HardwareParams& hp, double t_us, bool prep_one,
                        BitflipMode mode = BitflipMode::Both,
                        WindowConvention convention = WindowConvention::Printed,
                        const OdeInit* init_override = nullptr);

// Share of the apparent bit-flip outcome contributed by assigning each of
// the four dual-rail states; the four terms sum to apparent_bitflip(Both)
// exactly.
struct BitflipChannels {
  double from00 = 0.0;
  double from01 = 0.0;
  double from10 = 0.0;
  double from11 = 0.0;

  double total() const { return from00 + from01 + from10 + from11; }
};

BitflipChannels bitflip_channel_decomposition(
    const HardwareParams& hp, double t_us, bool prep_one,
    WindowConvention convention = WindowConvention::Printed);

// Deterministic polarization of the logical populations when the two cavity
// decay rates differ, conditioned on no jump having occurred. The population
// form evaluates, with x = e^{-(kA - kB) t} and normalized populations P':
//   <Z(t)> = (P10' - P10' x) / (1 - P01' (1 - x))
// which is zero at t = 0 for every preparation. The amplitude variant feeds
// the same expression with normalized amplitude weights sqrt(P)/sum(sqrt(P))
// instead of P', and swap_pairing exchanges which rail each preparation
// error is attributed to.
double no_jump_z_population(const HardwareParams& hp, double t_us,
                            bool prep_one);
double no_jump_z_amplitude(const HardwareParams& hp, double t_us,
                           bool prep_one, bool swap_pairing = false);

// Intrinsic lifetime estimates probed at probe_t_us (default 1 us):
// T = probe / p(flip at probe). Index 0 is prep |0_L>, index 1 prep |1_L>.
struct IntrinsicLifetimes {
  double t_leakage_seepage_us[2] = {0.0, 0.0};
  double t_no_jump_population_us[2] = {0.0, 0.0};  // may be infinite
  double t_no_jump_amplitude_us[2] = {0.0, 0.0};
  double t_total_us[2] = {0.0, 0.0};
  std::string report;  // discrepancy notes for the no-jump extraction
};

IntrinsicLifetimes intrinsic_lifetimes(const HardwareParams& hp,
                                       double probe_t_us = 1.0);

}  // namespace budget
}  // namespace dualrail
