#include "dualrail/budget.hpp"

#include "dualrail/pulses.hpp"

#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dualrail {
namespace budget {
namespace {

double readout_wall_us(const HardwareParams& hp) {
  return std::max(hp.alice.t_m_us, hp.bob.t_m_us);
}

double check_wall_us(const HardwareParams& hp) {
  return readout_wall_us(hp) + std::max(hp.alice.t_d_us, hp.bob.t_d_us);
}

}  // namespace

double AssignmentBudget::total() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.value;
  return sum;
}

double AssignmentBudget::relative(std::size_t i) const {
  if (i >= terms.size()) throw std::out_of_range("budget term index");
  const double sum = total();
  return sum > 0.0 ? terms[i].value / sum : 0.0;
}

AssignmentBudget assignment_budget(const HardwareParams& hp, Subsystem s,
                                   bool photon, bool include_prep,
                                   WindowConvention convention,
                                   RateForm rate_form) {
  const SubsystemParams& sp = hp.sub(s);
  const PulseErrors pe = pulse_selectivity_errors(hp, s);
  const double t_map = sp.t_map_us();
  const double t_m = sp.t_m_us;
  const bool printed = (convention == WindowConvention::Printed);
  const bool expo = (rate_form == RateForm::Exponential);
  const auto frac = [expo](double t, double tau) {
    return expo ? 1.0 - std::exp(-t / tau) : t / tau;
  };

  // Printed keeps the compact windows; ScheduleMatched integrates over the
  // end-aligned schedule the simulator runs. The cavity is exposed from the
  // prep boundary to the map midpoint: one check wall when conditioning on
  // the state at measurement start, the state-prep wall on top of that when
  // the prep row is included (its own estimate already covers t_M of it).
  const double wall = check_wall_us(hp);
  double cavity_window;
  if (printed)
    cavity_window = (2.0 * t_m + t_map) / 2.0;
  else
    cavity_window =
        include_prep ? 2.0 * wall + t_map / 2.0 - t_m : wall + t_map / 2.0;
  // decay of the mapped transmon between the map pulse and its projection:
  // the end-alignment wait plus half the readout at the readout-mode lifetime
  const double readout_decay =
      printed ? frac(t_m / 2.0, sp.t1_ro_us)
              : frac(readout_wall_us(hp) - t_m, sp.t1t_us) +
                    frac(t_m / 2.0, sp.t1_ro_us);
  const double map_flip =
      printed ? frac(t_map, sp.t2rt_us)
              : 0.5 * (1.0 - std::exp(-t_map / (2.0 * sp.tphi_t_us())));

  AssignmentBudget b;
  b.subsystem = s;
  b.photon = photon;
  b.include_prep = include_prep;
  b.convention = convention;

  if (photon) {
    if (include_prep)
      b.terms.push_back(
          {"state prep", prep_error_estimates(hp, s).eps1_check});
    b.terms.push_back({"cavity decay before mapping midpoint",
                       frac(cavity_window, sp.t1c_us)});
    b.terms.push_back({"transmon dephasing during mapping", map_flip});
    if (!printed)
      b.terms.push_back(
          {"transmon decay during mapping", frac(t_map / 2.0, sp.t1t_us)});
    b.terms.push_back({"transmon decay during readout", readout_decay});
    b.terms.push_back({"readout classification", sp.p_eg});
  } else {
    if (include_prep)
      b.terms.push_back(
          {"state prep", prep_error_estimates(hp, s).eps0_check});
    b.terms.push_back({"cavity heating before mapping midpoint",
                       sp.nth_c * frac(cavity_window, sp.t1c_us)});
    if (!printed)
      // heating during the unflagged second half of the last transmon check
      // (the projection already happened, so the next map sees |e>)
      b.terms.push_back({"transmon heating during state check",
                         sp.nth_ro * frac(t_m / 2.0, sp.t1_ro_us) +
                             sp.nth_t * frac(sp.t_d_us, sp.t1t_us)});
    b.terms.push_back(
        {"transmon heating during mapping",
         printed ? sp.nth_t * frac(t_map / 2.0, sp.t1t_us)
                 : sp.nth_t * frac(t_map, sp.t1t_us)});
    b.terms.push_back(
        {"transmon heating during readout",
         printed ? sp.nth_ro * frac(t_m / 2.0, sp.t1_ro_us)
                 : sp.nth_ro * frac(t_m / 2.0, sp.t1_ro_us) +
                       sp.nth_t * frac(readout_wall_us(hp) - t_m,
                                       sp.t1t_us)});
    b.terms.push_back({"selective pulse unselectivity", pe.p_us});
    b.terms.push_back({"readout classification", sp.p_ge});
  }
  return b;
}

double assignment_probability(const HardwareParams& hp, Subsystem s,
                              bool photon, bool include_prep,
                              WindowConvention convention,
                              RateForm rate_form) {
  return assignment_budget(hp, s, photon, include_prep, convention, rate_form)
      .total();
}

PrepErrorEstimates prep_error_estimates(const HardwareParams& hp,
                                        Subsystem s) {
  const SubsystemParams& sp = hp.sub(s);
  // measurement-only assignment probabilities break the circularity between
  // the prep estimates and the budgets that contain them
  const double p0g1 = assignment_probability(hp, s, true, false);
  const double p1g0 = assignment_probability(hp, s, false, false);
  const double t_m = sp.t_m_us;
  const double heat_last = sp.nth_c * t_m / sp.t1c_us;
  const double decay_last = t_m / sp.t1c_us;

  PrepErrorEstimates e;
  e.eps_reset = sp.nth_c * std::pow(p0g1, kResetConfirmations) +
                (1.0 - sp.nth_c) *
                    (std::pow(1.0 - p1g0, kResetConfirmations) * heat_last);

  const double idle_frac = (hp.tau_ocp_us + t_m) / sp.t1c_us;
  e.eps0_check = (1.0 - e.eps_reset) * sp.nth_c * idle_frac +
                 e.eps_reset * (1.0 - idle_frac);
  e.eps1_check = sp.eps_ocp * (1.0 - sp.nth_c * decay_last) +
                 (1.0 - sp.eps_ocp) * decay_last;

  e.eps0_cm = e.eps0_check * std::pow(p0g1, kCavityChecks) +
              (1.0 - e.eps0_check) *
                  (std::pow(1.0 - p1g0, kCavityChecks) * heat_last);
  e.eps1_cm = e.eps1_check * std::pow(p1g0, kCavityChecks) +
              (1.0 - e.eps1_check) *
                  (std::pow(1.0 - p0g1, kCavityChecks) * decay_last);

  e.ratio0 = e.eps0_check / heat_last;
  e.ratio1 = e.eps1_check / decay_last;
  return e;
}

double eps00(const HardwareParams& hp) {
  const double ea = prep_error_estimates(hp, Subsystem::Alice).eps_reset;
  const double eb = prep_error_estimates(hp, Subsystem::Bob).eps_reset;
  return ea + eb + ea * eb;
}

double SpamMatrixAnalytic::column_residual(int c) const {
  if (c < 0 || c > 3) throw std::out_of_range("spam matrix column");
  double sum = 0.0;
  for (int r = 0; r < 4; ++r) sum += p[r][c];
  return sum - 1.0;
}

SpamMatrixAnalytic spam_matrix(const HardwareParams& hp, bool include_prep,
                               WindowConvention convention) {
  SpamMatrixAnalytic m;
  m.include_prep = include_prep;
  m.convention = convention;

  // per subsystem: probability of reading the wrong bit given the loaded bit
  double flip[2][2];  // [subsystem 0=Bob, 1=Alice][loaded bit]
  for (int si = 0; si < 2; ++si) {
    const Subsystem s = (si == 0) ? Subsystem::Bob : Subsystem::Alice;
    flip[si][0] =
        assignment_probability(hp, s, false, include_prep, convention);
    flip[si][1] =
        assignment_probability(hp, s, true, include_prep, convention);
  }

  for (int c = 0; c < 4; ++c) {
    const int cb = (c >> 1) & 1;  // loaded Bob bit
    const int ca = c & 1;         // loaded Alice bit
    for (int r = 0; r < 4; ++r) {
      const int rb = (r >> 1) & 1;
      const int ra = r & 1;
      const double pb = (rb == cb) ? 1.0 - flip[0][cb] : flip[0][cb];
      const double pa = (ra == ca) ? 1.0 - flip[1][ca] : flip[1][ca];
      m.p[r][c] = pb * pa;
    }
  }
  return m;
}

std::string format_budget_table(const AssignmentBudget& b) {
  std::size_t width = std::strlen("total");
  for (const auto& t : b.terms) width = std::max(width, t.label.size());

  std::ostringstream os;
  os << (b.subsystem == Subsystem::Alice ? "alice" : "bob") << " p(\""
     << (b.photon ? "0\" | photon loaded)" : "1\" | vacuum loaded)")
     << (b.include_prep ? ", prep included" : ", measurement only") << "\n";
  os << std::left << std::setw(static_cast<int>(width)) << "mechanism"
     << "  " << std::right << std::setw(10) << "raw" << std::setw(10)
     << "share" << "\n";
  for (std::size_t i = 0; i < b.terms.size(); ++i) {
    os << std::left << std::setw(static_cast<int>(width)) << b.terms[i].label
       << "  " << std::right << std::scientific << std::setprecision(2)
       << std::setw(10) << b.terms[i].value << std::fixed
       << std::setprecision(1) << std::setw(9) << 100.0 * b.relative(i)
       << "%\n";
  }
  os << std::left << std::setw(static_cast<int>(width)) << "total" << "  "
     << std::right << std::scientific << std::setprecision(2) << std::setw(10)
     << b.total() << std::fixed << std::setprecision(1) << std::setw(9)
     << 100.0 << "%\n";
  return os.str();
}

}  // namespace budget
}  // namespace dualrail
