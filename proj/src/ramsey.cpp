#include "dualrail/ramsey.hpp"

#include "dualrail/gates.hpp"

#include <cmath>
#include <numbers>

namespace dualrail {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

RamseyPoint run_ramsey_point(const ProtocolEngine& eng, double delay_us,
                             const RamseyConfig& cfg) {
  const SpaceLayout& space = eng.space();
  BranchSet set = eng.prepare_logical(0, 1, PrepMethod::CheckOnly);

  eng.apply_gate(set, beamsplitter_unitary(space, kPi / 2.0, 0.0));
  if (cfg.echo) {
    eng.idle(set, delay_us / 2.0, cfg.detuning_mhz, cfg.gamma_phi_per_us);
    eng.apply_gate(set, beamsplitter_unitary(space, kPi, 0.0));
    eng.idle(set, delay_us / 2.0, cfg.detuning_mhz, cfg.gamma_phi_per_us);
  } else if (delay_us > 0.0) {
    eng.idle(set, delay_us, cfg.detuning_mhz, cfg.gamma_phi_per_us);
  }
  eng.apply_gate(
      set, beamsplitter_unitary(space, kPi / 2.0, cfg.second_pulse_phase));

  eng.logical_measurement(set, cfg.rounds);
  const LeafDistribution dist =
      distill(set, eng.plan(cfg.rounds, PrepMethod::CheckOnly));

  RamseyPoint pt;
  pt.delay_us = delay_us;
  pt.phase = cfg.second_pulse_phase;
  pt.metrics = dist.tally();
  pt.pruned_mass = dist.pruned_mass;
  const double n01 = pt.metrics.n_01;
  const double n10 = pt.metrics.n_10;
  pt.z_logical = (n01 + n10 > 0.0) ? (n10 - n01) / (n10 + n01) : 0.0;
  pt.erasure_fraction = pt.metrics.erasure_fraction();
  return pt;
}

ContrastPoint phase_sweep_contrast(const ProtocolEngine& eng, double delay_us,
                                   const std::vector<double>& phases,
                                   const RamseyConfig& cfg) {
  std::vector<double> z(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    RamseyConfig point_cfg = cfg;
    point_cfg.second_pulse_phase = phases[i];
    z[i] = run_ramsey_point(eng, delay_us, point_cfg).z_logical;
  }
  const fits::SinusoidFit fit = fits::fit_sinusoid(phases, z);

  ContrastPoint out;
  out.delay_us = delay_us;
  out.contrast = fit.amplitude;
  out.offset = fit.offset;
  return out;
}

DephasingResult extract_dephasing(const ProtocolEngine& eng,
                                  const std::vector<double>& delays_us,
                                  const std::vector<double>& phases,
                                  const RamseyConfig& cfg) {
  DephasingResult res;
  res.contrast_at_zero =
      phase_sweep_contrast(eng, 0.0, phases, cfg).contrast;

  std::vector<double> t;
  for (double d : delays_us) {
    const ContrastPoint c = phase_sweep_contrast(eng, d, phases, cfg);
    res.contrasts.push_back(c);
    res.p_phi.push_back(0.5 * (1.0 - c.contrast / res.contrast_at_zero));
    t.push_back(d);
  }
  res.fit = fits::fit_linear(t, res.p_phi);
  return res;
}

}  // namespace dualrail
