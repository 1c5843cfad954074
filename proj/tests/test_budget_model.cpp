#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualrail/bitflip.hpp"
#include "dualrail/budget.hpp"
#include "dualrail/params.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace dualrail;
using namespace dualrail::budget;

namespace {

int argmax_term(const AssignmentBudget& b) {
  int best = 0;
  for (std::size_t i = 1; i < b.terms.size(); ++i)
    if (b.terms[i].value > b.terms[static_cast<std::size_t>(best)].value)
      best = static_cast<int>(i);
  return best;
}

int second_term(const AssignmentBudget& b, int top) {
  int best = -1;
  for (std::size_t i = 0; i < b.terms.size(); ++i) {
    if (static_cast<int>(i) == top) continue;
    if (best < 0 || b.terms[i].value > b.terms[static_cast<std::size_t>(best)].value)
      best = static_cast<int>(i);
  }
  return best;
}

}  // namespace

TEST_CASE("budget relative contributions sum to one") {
  HardwareParams hp = default_params();
  for (Subsystem s : {Subsystem::Alice, Subsystem::Bob})
    for (bool photon : {true, false}) {
      AssignmentBudget b = assignment_budget(hp, s, photon);
      double rel = 0.0;
      for (std::size_t i = 0; i < b.terms.size(); ++i) rel += b.relative(i);
      CHECK(rel == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(b.total() > 0.0);
      CHECK(b.total() < 1.0);
    }
}

TEST_CASE("alice photon-loss budget against its reference values") {
  HardwareParams hp = default_params();
  AssignmentBudget b = assignment_budget(hp, Subsystem::Alice, true);
  REQUIRE(b.terms.size() == 5);

  CHECK(b.terms[0].label == "state prep");
  CHECK(b.terms[0].value == doctest::Approx(2.8593e-2).epsilon(1e-3));
  CHECK(b.terms[1].value == doctest::Approx(4.3919e-3).epsilon(1e-3));
  CHECK(b.terms[2].value == doctest::Approx(1.3043e-2).epsilon(1e-3));
  CHECK(b.terms[3].label == "transmon decay during readout");
  CHECK(b.terms[3].value == doctest::Approx(1.25e-2).epsilon(1e-3));
  CHECK(b.terms[4].value == doctest::Approx(hp.alice.p_eg).epsilon(1e-12));
  CHECK(b.total() == doctest::Approx(6.2558e-2).epsilon(1e-3));

  // the printed reference for the readout-decay row is 2.77e-2; the closed
  // form t_M / (2 T1_RO) evaluates 2.22x lower, a reported discrepancy
  const double printed_t1ro = 2.77e-2;
  CHECK(printed_t1ro / b.terms[3].value > 2.0);
  CHECK(printed_t1ro / b.terms[3].value < 2.5);
  CHECK(b.terms[3].value ==
        doctest::Approx(hp.alice.t_m_us / (2.0 * hp.alice.t1_ro_us)));
}

TEST_CASE("alice vacuum budget is dominated by readout classification") {
  HardwareParams hp = default_params();
  AssignmentBudget b = assignment_budget(hp, Subsystem::Alice, false);
  REQUIRE(b.terms.size() == 6);
  const int top = argmax_term(b);
  CHECK(b.terms[static_cast<std::size_t>(top)].label == "readout classification");
  CHECK(b.relative(static_cast<std::size_t>(top)) > 0.6);
  CHECK(b.terms[static_cast<std::size_t>(top)].value ==
        doctest::Approx(hp.alice.p_ge).epsilon(1e-12));
  CHECK(b.total() == doctest::Approx(1.3263e-3).epsilon(1e-3));
}

TEST_CASE("bob budgets match their reference totals") {
  HardwareParams hp = default_params();
  AssignmentBudget ph = assignment_budget(hp, Subsystem::Bob, true);
  CHECK(ph.total() == doctest::Approx(5.3922e-2).epsilon(1e-3));
  CHECK(ph.terms[argmax_term(ph) < 0 ? 0u : static_cast<std::size_t>(argmax_term(ph))]
            .label == "transmon decay during readout");

  AssignmentBudget vac = assignment_budget(hp, Subsystem::Bob, false);
  CHECK(vac.total() == doctest::Approx(5.2434e-3).epsilon(1e-3));
  CHECK(vac.terms[static_cast<std::size_t>(argmax_term(vac))].label ==
        "readout classification");
}

TEST_CASE("include_prep only removes the state-prep row") {
  HardwareParams hp = default_params();
  AssignmentBudget with = assignment_budget(hp, Subsystem::Alice, true, true);
  AssignmentBudget without = assignment_budget(hp, Subsystem::Alice, true, false);
  CHECK(with.terms.size() == without.terms.size() + 1);
  CHECK(with.total() - without.total() ==
        doctest::Approx(with.terms[0].value).epsilon(1e-12));
}

TEST_CASE("budget rank order of the top rows survives a 1% nudge") {
  HardwareParams base = default_params();
  struct Field {
    double SubsystemParams::* member;
  };
  const Field fields[] = {
      {&SubsystemParams::t1c_us},    {&SubsystemParams::t2rt_us},
      {&SubsystemParams::t1t_us},    {&SubsystemParams::t1_ro_us},
      {&SubsystemParams::nth_c},     {&SubsystemParams::nth_ro},
      {&SubsystemParams::p_ge},      {&SubsystemParams::p_eg},
      {&SubsystemParams::eps_ocp}};

  for (Subsystem s : {Subsystem::Alice, Subsystem::Bob})
    for (bool photon : {true, false}) {
      AssignmentBudget ref = assignment_budget(base, s, photon);
      const int top = argmax_term(ref);
      const int next = second_term(ref, top);
      for (const Field& f : fields)
        for (double scale : {0.99, 1.01}) {
          HardwareParams hp = base;
          hp.alice.*(f.member) *= scale;
          hp.bob.*(f.member) *= scale;
          AssignmentBudget b = assignment_budget(hp, s, photon);
          CAPTURE(photon);
          CAPTURE(scale);
          const int t2 = argmax_term(b);
          CHECK(b.terms[static_cast<std::size_t>(t2)].label ==
                ref.terms[static_cast<std::size_t>(top)].label);
          CHECK(b.terms[static_cast<std::size_t>(second_term(b, t2))].label ==
                ref.terms[static_cast<std::size_t>(next)].label);
        }
    }
}

TEST_CASE("noiseless parameters collapse every budget row") {
  HardwareParams hp = zero_error_params();
  for (Subsystem s : {Subsystem::Alice, Subsystem::Bob})
    for (bool photon : {true, false})
      CHECK(assignment_probability(hp, s, photon) < 1e-7);
}

TEST_CASE("exponential rate form undershoots the linear one slightly") {
  HardwareParams hp = default_params();
  const double lin = assignment_probability(hp, Subsystem::Alice, true);
  const double expo =
      assignment_probability(hp, Subsystem::Alice, true, true,
                             WindowConvention::Printed, RateForm::Exponential);
  CHECK(expo < lin);
  CHECK((lin - expo) / lin < 0.01);
}

TEST_CASE("schedule-matched windows are longer than the printed ones") {
  HardwareParams hp = default_params();
  const double printed = assignment_probability(hp, Subsystem::Alice, true);
  const double sm = assignment_probability(
      hp, Subsystem::Alice, true, true, WindowConvention::ScheduleMatched);
  CHECK(sm > printed);
  CHECK(sm / printed < 1.5);
}

TEST_CASE("state preparation estimates against the reference table") {
  HardwareParams hp = default_params();
  PrepErrorEstimates a = prep_error_estimates(hp, Subsystem::Alice);
  PrepErrorEstimates b = prep_error_estimates(hp, Subsystem::Bob);

  CHECK(a.eps0_check == doctest::Approx(2.9404e-6).epsilon(1e-3));
  CHECK(a.eps1_check == doctest::Approx(2.8593e-2).epsilon(1e-3));
  CHECK(a.eps0_cm == doctest::Approx(1.1746e-6).epsilon(1e-3));
  CHECK(a.eps1_cm == doctest::Approx(2.7610e-3).epsilon(1e-3));
  CHECK(b.eps0_check == doctest::Approx(3.9060e-6).epsilon(1e-3));
  CHECK(b.eps1_check == doctest::Approx(1.6917e-2).epsilon(1e-3));

  // printed counterpart: eps1_check(Bob) = 1.80e-2
  CHECK(b.eps1_check == doctest::Approx(1.80e-2).epsilon(0.2));

  // repeated cavity checks help, and more so for the lossier cavity
  for (const PrepErrorEstimates* e : {&a, &b}) {
    CHECK(e->eps0_cm <= e->eps0_check);
    CHECK(e->eps1_cm <= e->eps1_check);
    CHECK(e->ratio0 > 1.0);
    CHECK(e->ratio1 > 1.0);
  }
  CHECK(a.ratio1 > b.ratio1);

  CHECK(eps00(hp) == doctest::Approx(2.8667e-6).epsilon(1e-3));
  // joint composition of the two independent resets
  const double ea = a.eps_reset, eb = b.eps_reset;
  CHECK(eps00(hp) == doctest::Approx(ea + eb + ea * eb).epsilon(1e-12));
}

TEST_CASE("spam matrix combines the per-subsystem budgets first order") {
  HardwareParams hp = default_params();
  SpamMatrixAnalytic m = spam_matrix(hp);

  const double fb0 = assignment_probability(hp, Subsystem::Bob, false);
  const double fb1 = assignment_probability(hp, Subsystem::Bob, true);
  const double fa0 = assignment_probability(hp, Subsystem::Alice, false);
  const double fa1 = assignment_probability(hp, Subsystem::Alice, true);

  // column |01>: Bob vacuum, Alice photon
  CHECK(m.p[0][1] == doctest::Approx((1.0 - fb0) * fa1).epsilon(1e-12));
  CHECK(m.p[1][1] == doctest::Approx((1.0 - fb0) * (1.0 - fa1)).epsilon(1e-12));
  CHECK(m.p[2][1] == doctest::Approx(fb0 * fa1).epsilon(1e-12));
  CHECK(m.p[3][1] == doctest::Approx(fb0 * (1.0 - fa1)).epsilon(1e-12));

  // logical misassignment elements land at the 1e-4 scale
  CHECK(m.p[2][1] > 0.5e-4);
  CHECK(m.p[2][1] < 5e-4);
  CHECK(m.p[1][2] > 0.2e-4);
  CHECK(m.p[1][2] < 5e-4);

  // per-subsystem pairs are built as (1 - p, p), so columns close exactly
  for (int c = 0; c < 4; ++c) CHECK(std::abs(m.column_residual(c)) < 1e-12);
}

TEST_CASE("zero-error spam matrix is the identity") {
  SpamMatrixAnalytic m = spam_matrix(zero_error_params());
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(std::abs(m.p[r][c] - (r == c ? 1.0 : 0.0)) < 1e-7);
}

TEST_CASE("ode populations: initial conditions, fixed point, probability") {
  HardwareParams hp = default_params();
  OdeInit init = prep_init(hp, false);
  CHECK(init.excited_b ==
        doctest::Approx(prep_error_estimates(hp, Subsystem::Bob).eps0_check));
  CHECK(init.excited_a ==
        doctest::Approx(1.0 - prep_error_estimates(hp, Subsystem::Alice).eps1_check));

  PopulationCurves at0 = ode_populations(hp, 0.0, init);
  CHECK(at0.p01 == doctest::Approx((1.0 - init.excited_b) * init.excited_a)
                       .epsilon(1e-12));
  CHECK(at0.sum() == doctest::Approx(1.0).epsilon(1e-14));

  // the per-cavity thermal fixed point is nth/(1+nth)
  PopulationCurves late = ode_populations(hp, 1e9, init);
  const double eb = hp.bob.nth_c / (1.0 + hp.bob.nth_c);
  const double ea = hp.alice.nth_c / (1.0 + hp.alice.nth_c);
  CHECK(late.p11 == doctest::Approx(eb * ea).epsilon(1e-9));
  CHECK(late.p10 == doctest::Approx(eb * (1.0 - ea)).epsilon(1e-9));

  for (double t : {1.0, 50.0, 2000.0})
    CHECK(ode_populations(hp, t, init).sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ode closed form matches an rk4 integration to 1e-9") {
  HardwareParams hp = default_params();
  OdeInit init = prep_init(hp, true);

  // two independent two-level rate equations, dPe/dt = up (1 - Pe) - dn Pe
  double pe_b = init.excited_b, pe_a = init.excited_a;
  const double up_b = hp.bob.nth_c / hp.bob.t1c_us, dn_b = 1.0 / hp.bob.t1c_us;
  const double up_a = hp.alice.nth_c / hp.alice.t1c_us,
               dn_a = 1.0 / hp.alice.t1c_us;
  auto deriv = [](double pe, double up, double dn) {
    return up * (1.0 - pe) - dn * pe;
  };
  const double dt = 0.05;
  double t = 0.0;
  double worst = 0.0;
  for (int step = 1; step <= 200000; ++step) {
    for (auto [pe, up, dn] :
         {std::tie(pe_b, up_b, dn_b), std::tie(pe_a, up_a, dn_a)}) {
      const double k1 = deriv(pe, up, dn);
      const double k2 = deriv(pe + 0.5 * dt * k1, up, dn);
      const double k3 = deriv(pe + 0.5 * dt * k2, up, dn);
      const double k4 = deriv(pe + dt * k3, up, dn);
      pe += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = step * dt;
    if (step % 20000 == 0) {
      PopulationCurves c = ode_populations(hp, t, init);
      worst = std::max(worst, std::abs(c.p10 - pe_b * (1.0 - pe_a)));
      worst = std::max(worst, std::abs(c.p01 - (1.0 - pe_b) * pe_a));
      worst = std::max(worst, std::abs(c.p00 - (1.0 - pe_b) * (1.0 - pe_a)));
    }
  }
  CHECK(t == doctest::Approx(10000.0));
  CHECK(worst < 1e-9);
}

TEST_CASE("freezing the heating channel leaves pure decay") {
  HardwareParams hp = default_params();
  OdeInit init{0.3, 0.8};
  const double t = 137.0;
  PopulationCurves c = ode_populations(hp, t, init, true);
  const double pe_b = 0.3 * std::exp(-t / hp.bob.t1c_us);
  const double pe_a = 0.8 * std::exp(-t / hp.alice.t1c_us);
  CHECK(c.p11 == doctest::Approx(pe_b * pe_a).epsilon(1e-12));
  CHECK(c.p01 == doctest::Approx((1.0 - pe_b) * pe_a).epsilon(1e-12));
}

TEST_CASE("intrinsic-only bit flips grow quadratically at short times") {
  HardwareParams hp = default_params();
  OdeInit clean{0.0, 1.0};
  for (double t : {0.5, 1.0, 2.0}) {
    const double got = apparent_bitflip(hp, t, false, BitflipMode::IntrinsicOnly,
                                        WindowConvention::Printed, &clean);
    const double pred =
        hp.bob.nth_c * t * t / (hp.alice.t1c_us * hp.bob.t1c_us);
    CHECK(got == doctest::Approx(pred).epsilon(0.01));
  }
}

TEST_CASE("apparent bit-flip curve: level, growth and saturation") {
  HardwareParams hp = default_params();

  CHECK(apparent_bitflip(hp, 1.0, false) ==
        doctest::Approx(3.5508e-4).epsilon(1e-3));
  CHECK(apparent_bitflip(hp, 1.0, true) ==
        doctest::Approx(7.8648e-5).epsilon(1e-3));

  // strictly increasing over the scanned range
  double prev0 = 0.0, prev1 = 0.0;
  for (double t : {1.0, 10.0, 100.0, 500.0, 1000.0, 2000.0, 5000.0, 10000.0}) {
    const double p0 = apparent_bitflip(hp, t, false);
    const double p1 = apparent_bitflip(hp, t, true);
    CAPTURE(t);
    CHECK(p0 > prev0);
    CHECK(p1 > prev1);
    prev0 = p0;
    prev1 = p1;
  }

  // long-time saturation splits 3:1 between the preparations
  CHECK(std::abs(apparent_bitflip(hp, 1e4, false) - 0.75) < 0.07);
  CHECK(std::abs(apparent_bitflip(hp, 1e4, true) - 0.25) < 0.07);
}

TEST_CASE("measurement-only flips at zero delay match the spam matrix") {
  HardwareParams hp = default_params();
  SpamMatrixAnalytic m = spam_matrix(hp);
  const double from_spam = m.p[2][1] / (m.p[1][1] + m.p[2][1]);
  const double from_curve =
      apparent_bitflip(hp, 0.0, false, BitflipMode::MeasurementOnly);
  CHECK(from_curve == doctest::Approx(from_spam).epsilon(0.03));
}

TEST_CASE("adding intrinsic flips never lowers the apparent rate") {
  HardwareParams hp = default_params();
  for (double t : {0.0, 1.0, 100.0, 1000.0, 10000.0})
    for (bool prep_one : {false, true}) {
      CAPTURE(t);
      CHECK(apparent_bitflip(hp, t, prep_one) >=
            apparent_bitflip(hp, t, prep_one, BitflipMode::MeasurementOnly) -
                1e-15);
    }
}

TEST_CASE("bit-flip channel decomposition partitions the total") {
  HardwareParams hp = default_params();
  for (double t : {1.0, 1000.0})
    for (bool prep_one : {false, true}) {
      BitflipChannels d = bitflip_channel_decomposition(hp, t, prep_one);
      CHECK(d.total() ==
            doctest::Approx(apparent_bitflip(hp, t, prep_one)).epsilon(1e-12));
      CHECK(d.from00 >= 0.0);
      CHECK(d.from11 >= 0.0);
    }

  // leakage-state misassignment takes over at long idle times
  BitflipChannels early = bitflip_channel_decomposition(hp, 1.0, false);
  BitflipChannels late = bitflip_channel_decomposition(hp, 1000.0, false);
  CHECK(early.from00 / early.total() == doctest::Approx(0.478).epsilon(0.05));
  CHECK(late.from00 / late.total() == doctest::Approx(0.964).epsilon(0.02));
}

TEST_CASE("intrinsic fraction at one millisecond for nth 1e-4") {
  HardwareParams hp = default_params();
  hp.alice.nth_c = 1e-4;
  hp.bob.nth_c = 1e-4;
  for (bool prep_one : {false, true}) {
    const double frac =
        apparent_bitflip(hp, 1000.0, prep_one, BitflipMode::IntrinsicOnly) /
        apparent_bitflip(hp, 1000.0, prep_one, BitflipMode::Both);
    CAPTURE(prep_one);
    CHECK(frac > 0.01);
    CHECK(frac < 0.08);
  }
}

TEST_CASE("no-jump polarization vanishes at t = 0 and for equal rates") {
  HardwareParams hp = default_params();
  CHECK(no_jump_z_population(hp, 0.0, false) == doctest::Approx(0.0));
  CHECK(no_jump_z_population(hp, 0.0, true) == doctest::Approx(0.0));

  HardwareParams equal = hp;
  equal.alice.t1c_us = equal.bob.t1c_us;
  for (double t : {1.0, 100.0, 10000.0}) {
    CHECK(std::abs(no_jump_z_amplitude(equal, t, false)) < 1e-12);
    CHECK(std::abs(no_jump_z_amplitude(equal, t, true)) < 1e-12);
  }

  // with unequal rates the conditioned state polarizes toward the
  // longer-lived rail, here Bob's
  CHECK(no_jump_z_amplitude(hp, 1000.0, false) > 0.0);
}

TEST_CASE("intrinsic lifetime estimates and discrepancy report") {
  HardwareParams hp = default_params();
  IntrinsicLifetimes il = intrinsic_lifetimes(hp);

  CHECK(il.t_leakage_seepage_us[0] == doctest::Approx(7.552e6).epsilon(1e-3));
  CHECK(il.t_leakage_seepage_us[1] == doctest::Approx(1.438e7).epsilon(1e-3));
  CHECK(std::isinf(il.t_no_jump_population_us[0]));
  CHECK(il.t_no_jump_population_us[1] > 0.0);
  CHECK(il.t_total_us[0] == doctest::Approx(1.8937e6).epsilon(1e-3));
  CHECK(il.t_total_us[1] == doctest::Approx(3.0088e6).epsilon(1e-3));

  // totals combine leakage-seepage with the amplitude-form no-jump rate
  for (int i : {0, 1}) {
    const double combined = 1.0 / (1.0 / il.t_leakage_seepage_us[i] +
                                   1.0 / il.t_no_jump_amplitude_us[i]);
    CHECK(il.t_total_us[i] == doctest::Approx(combined).epsilon(1e-9));
  }

  CHECK(il.report.find("pairing") != std::string::npos);
  CHECK(il.report.find("no-jump") != std::string::npos);
}
