#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualrail/gates.hpp"
#include "dualrail/layout.hpp"
#include "dualrail/params.hpp"
#include "dualrail/pulses.hpp"

#include <cmath>
#include <complex>
#include <string>

using namespace dualrail;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("default layout shape and indexing") {
  SpaceLayout space = default_layout();
  CHECK(space.n_modes() == 4);
  CHECK(space.dim() == 16);

  // mode 0 is the most significant digit
  CHECK(space.index({1, 0, 1, 0}) == 10);
  CHECK(space.index({0, 0, 0, 1}) == 1);
  CHECK(space.index({1, 1, 1, 1}) == 15);

  for (int i = 0; i < space.dim(); ++i) {
    CHECK(space.index(space.occupations(i)) == i);
  }

  CHECK(space.occupation(10, Mode::CavityB) == 1);
  CHECK(space.occupation(10, Mode::TransmonB) == 0);
  CHECK(space.occupation(10, Mode::CavityA) == 1);
  CHECK(space.occupation(10, Mode::TransmonA) == 0);
}

TEST_CASE("layout rejects invalid construction") {
  CHECK_THROWS_AS(SpaceLayout::build({}), std::invalid_argument);
  CHECK_THROWS_AS(SpaceLayout::build({2, 1}), std::invalid_argument);
  SpaceLayout space = default_layout();
  CHECK_THROWS_AS(space.index({0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(space.index({0, 0, 0, 2}), std::out_of_range);
  CHECK_THROWS_AS(space.occupations(16), std::out_of_range);
}

TEST_CASE("kron matches block structure") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  Matrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == complexd(1, 0));
  CHECK(k(0, 0) == complexd(0, 0));
  CHECK(k(2, 1) == complexd(3, 0));
  CHECK(k(2, 3) == complexd(4, 0));
  CHECK(k(3, 2) == complexd(4, 0));
}

TEST_CASE("embedding agrees with explicit kron products") {
  SpaceLayout space = default_layout();
  Matrix x = space.mode_operator(Mode::TransmonA, ModeOp::PauliX);
  Matrix id2 = Matrix::Identity(2, 2);

  Matrix manual = kron(kron(kron(id2, id2), id2), x);
  CHECK((space.embed(Mode::TransmonA, x) - manual).cwiseAbs().maxCoeff() == 0.0);

  Matrix n = space.mode_operator(Mode::CavityB, ModeOp::Number);
  manual = kron(kron(kron(n, id2), id2), id2);
  CHECK((space.embed(Mode::CavityB, n) - manual).cwiseAbs().maxCoeff() == 0.0);

  // embedded operators on different modes commute
  Matrix xa = space.embed(Mode::TransmonA, x);
  Matrix nb = space.embed(Mode::CavityB, n);
  CHECK((xa * nb - nb * xa).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mode operators") {
  SpaceLayout space = SpaceLayout::build({3});
  Matrix a = space.mode_operator(0, ModeOp::Annihilation);
  CHECK(a(0, 1).real() == doctest::Approx(1.0));
  CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  Matrix n = space.mode_operator(0, ModeOp::Number);
  CHECK((a.adjoint() * a - n).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(space.mode_operator(0, ModeOp::PauliX), std::invalid_argument);
  CHECK_THROWS_AS(space.mode_operator(0, ModeOp::PauliZ), std::invalid_argument);

  SpaceLayout q = SpaceLayout::build({2});
  Matrix z = q.mode_operator(0, ModeOp::PauliZ);
  CHECK(z(0, 0).real() == 1.0);
  CHECK(z(1, 1).real() == -1.0);
  Matrix p0 = q.mode_operator(0, ModeOp::Projector0);
  Matrix p1 = q.mode_operator(0, ModeOp::Projector1);
  CHECK(((p0 + p1) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis kets and densities") {
  SpaceLayout space = default_layout();
  Vector k01 = basis_ket(space, {0, 0, 1, 0});
  CHECK(k01(2).real() == 1.0);
  CHECK(k01.squaredNorm() == doctest::Approx(1.0));
  Matrix rho = pure_density(k01);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(rho(2, 2).real() == doctest::Approx(1.0));
}

TEST_CASE("subsystem mode bookkeeping") {
  CHECK(cavity_of(Subsystem::Bob) == Mode::CavityB);
  CHECK(cavity_of(Subsystem::Alice) == Mode::CavityA);
  CHECK(transmon_of(Subsystem::Bob) == Mode::TransmonB);
  CHECK(transmon_of(Subsystem::Alice) == Mode::TransmonA);
  CHECK(std::string(subsystem_tag(Subsystem::Alice)) == "A");
  CHECK(other(Subsystem::Alice) == Subsystem::Bob);
}

TEST_CASE("built-in parameters validate and round trip through json") {
  HardwareParams code = default_params();
  CHECK_NOTHROW(code.validate());

  HardwareParams file = load_params(std::string(DUALRAIL_PARAMS_DIR) + "/params_paper.json");
  CHECK(file.alice.chi_cm_mhz == code.alice.chi_cm_mhz);
  CHECK(file.alice.t1c_us == code.alice.t1c_us);
  CHECK(file.alice.nth_c == code.alice.nth_c);
  CHECK(file.alice.p_eg == code.alice.p_eg);
  CHECK(file.alice.eps_ocp == code.alice.eps_ocp);
  CHECK(file.bob.t_m_us == code.bob.t_m_us);
  CHECK(file.bob.nth_ro == code.bob.nth_ro);
  CHECK(file.bob.p_ge == code.bob.p_ge);
  CHECK(file.bob.eps_ocp == code.bob.eps_ocp);
  CHECK(file.gamma_phi_ramsey_per_us == doctest::Approx(code.gamma_phi_ramsey_per_us).epsilon(1e-15));
  CHECK(file.gamma_phi_echo_per_us == doctest::Approx(code.gamma_phi_echo_per_us).epsilon(1e-15));
  CHECK(file.tau_ocp_us == code.tau_ocp_us);

  HardwareParams zfile =
      load_params(std::string(DUALRAIL_PARAMS_DIR) + "/params_zero_error.json");
  HardwareParams zcode = zero_error_params();
  CHECK(zfile.alice.t1c_us == zcode.alice.t1c_us);
  CHECK(zfile.alice.p_ge == 0.0);
  REQUIRE(zfile.bob.p_us_override.has_value());
  CHECK(*zfile.bob.p_us_override == 0.0);
  CHECK(*zfile.bob.p_s_override == 0.0);
  CHECK_NOTHROW(zfile.validate());
}

TEST_CASE("parameter validation names the offending field") {
  HardwareParams hp = default_params();
  hp.bob.t2rt_us = 2.0 * hp.bob.t1t_us + 1.0;
  try {
    hp.validate();
    FAIL("expected exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("subsystems.bob.t2rt_us") != std::string::npos);
  }

  hp = default_params();
  hp.alice.p_eg = 1.5;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);

  hp = default_params();
  hp.alice.t_m_us = 0.0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("derived pulse windows and dephasing times") {
  HardwareParams hp = default_params();
  CHECK(hp.alice.t_map_us() == doctest::Approx(1.2));
  CHECK(hp.alice.t_reset_us() == doctest::Approx(0.064));
  CHECK(hp.bob.t_map_us() == doctest::Approx(1.2));

  // 1/t_phi = 1/t2r - 1/(2 t1)
  const double tphi_a = hp.alice.tphi_t_us();
  CHECK(1.0 / tphi_a == doctest::Approx(1.0 / 92.0 - 1.0 / 250.0).epsilon(1e-12));
  CHECK(std::isinf(pure_dephasing_time(200.0, 100.0)));
}

TEST_CASE("beamsplitter pi rotation swaps the single-photon states") {
  SpaceLayout space = default_layout();
  const int i01 = space.index({0, 0, 1, 0});
  const int i10 = space.index({1, 0, 0, 0});

  Matrix rho = pure_density(basis_ket(space, {0, 0, 1, 0}));
  Matrix swapped = beamsplitter_rotation(space, rho, kPi, 0.0);
  CHECK(swapped(i10, i10).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(swapped(i01, i01)) < 1e-12);

  // 50-50 split at theta = pi/2
  Matrix half = beamsplitter_rotation(space, rho, kPi / 2.0, 0.0);
  CHECK(half(i01, i01).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half(i10, i10).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("two quarter beamsplitters compose to a half") {
  SpaceLayout space = default_layout();
  Matrix u90 = beamsplitter_unitary(space, kPi / 2.0, 0.0);
  Matrix u180 = beamsplitter_unitary(space, kPi, 0.0);
  CHECK((u90 * u90 - u180).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("beamsplitter is unitary and leaves 00 and 11 invariant") {
  SpaceLayout space = default_layout();
  Matrix u = beamsplitter_unitary(space, 1.234, 0.567);
  CHECK((u * u.adjoint() - space.identity()).cwiseAbs().maxCoeff() < 1e-12);

  Vector v00 = basis_ket(space, {0, 0, 0, 0});
  Vector v11 = basis_ket(space, {1, 0, 1, 0});
  CHECK((u * v00 - v00).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((u * v11 - v11).cwiseAbs().maxCoeff() < 1e-12);

  // equatorial rotation axis: theta = pi about phi = pi/2 maps |01> to
  // -i e^{i pi/2} |10> = |10> with a phase; populations must fully transfer
  Matrix rho = pure_density(basis_ket(space, {0, 0, 1, 0}));
  Matrix rot = beamsplitter_rotation(space, rho, kPi, kPi / 2.0);
  const int i10 = space.index({1, 0, 0, 0});
  CHECK(rot(i10, i10).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("selective pulse propagator acts per cavity photon number") {
  SpaceLayout space = default_layout();
  HardwareParams hp = default_params();
  const double sigma_s = hp.alice.sigma_s_ns * 1e-3;
  const double chi = std::abs(hp.alice.chi_cm_mhz);

  // zero dispersive shift: exact pi rotation regardless of the cavity state
  Matrix u0 = gaussian_pulse_propagate(space, Mode::TransmonA, sigma_s, 4, 0.0, 0.0, 1.0);
  for (int n : {0, 1}) {
    Vector in = basis_ket(space, {0, 0, n, 0});
    Vector out = u0 * in;
    const int flipped = space.index({0, 0, n, 1});
    CHECK(std::norm(out(flipped)) == doctest::Approx(1.0).epsilon(1e-9));
  }

  // detuning = chi targets n = 1; the n = 0 block sees the full dispersive
  // shift and its residual flip equals the selectivity oracle's p_us
  Matrix u1 = gaussian_pulse_propagate(space, Mode::TransmonA, sigma_s, 4, chi, chi, 1.0);
  Vector on_res = u1 * basis_ket(space, {0, 0, 1, 0});
  CHECK(std::norm(on_res(space.index({0, 0, 1, 1}))) == doctest::Approx(1.0).epsilon(1e-9));

  Vector off_res = u1 * basis_ket(space, {0, 0, 0, 0});
  const double leak = std::norm(off_res(space.index({0, 0, 0, 1})));
  PulseErrors pe = pulse_selectivity_errors(hp, Subsystem::Alice);
  CHECK(leak == doctest::Approx(pe.p_us).epsilon(1e-9));

  // zero drive: identity
  Matrix uz = gaussian_pulse_propagate(space, Mode::TransmonA, sigma_s, 4, chi, chi, 0.0);
  CHECK((uz - space.identity()).cwiseAbs().maxCoeff() < 1e-9);

  CHECK_THROWS_AS(gaussian_pulse_propagate(space, Mode::CavityA, sigma_s, 4, 0.0, 0.0, 1.0),
                  std::invalid_argument);
}
