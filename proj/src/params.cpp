#include "dualrail/params.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dualrail {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key))
    throw std::invalid_argument("params: missing field " + path + "." + key);
  const json& v = j.at(key);
  if (!v.is_number())
    throw std::invalid_argument("params: field " + path + "." + key + " must be a number");
  return v.get<double>();
}

SubsystemParams parse_subsystem(const json& j, const std::string& path) {
  SubsystemParams p;
  p.chi_cm_mhz = require_number(j, "chi_cm_mhz", path);
  p.chi_cc_khz = require_number(j, "chi_cc_khz", path);
  p.t1c_us = require_number(j, "t1c_us", path);
  p.t2rc_us = require_number(j, "t2rc_us", path);
  p.t2ec_us = require_number(j, "t2ec_us", path);
  p.nth_c = require_number(j, "nth_c", path);
  p.self_kerr_khz = require_number(j, "self_kerr_khz", path);
  p.omega_c_ghz = require_number(j, "omega_c_ghz", path);
  p.t1t_us = require_number(j, "t1t_us", path);
  p.t2rt_us = require_number(j, "t2rt_us", path);
  p.t2et_us = require_number(j, "t2et_us", path);
  p.nth_t = require_number(j, "nth_t", path);
  p.alpha_mhz = require_number(j, "alpha_mhz", path);
  p.omega_t_ghz = require_number(j, "omega_t_ghz", path);
  p.sigma_s_ns = require_number(j, "sigma_s_ns", path);
  p.sigma_us_ns = require_number(j, "sigma_us_ns", path);
  p.t_m_us = require_number(j, "t_m_us", path);
  p.t_d_us = require_number(j, "t_d_us", path);
  p.t1_ro_us = require_number(j, "t1_ro_us", path);
  p.nth_ro = require_number(j, "nth_ro", path);
  p.p_ge = require_number(j, "p_ge", path);
  p.p_eg = require_number(j, "p_eg", path);
  p.eps_ocp = require_number(j, "eps_ocp", path);
  return p;
}

void parse_override(const json& j, const std::string& name, SubsystemParams& p) {
  if (!j.contains(name)) return;
  const json& o = j.at(name);
  if (o.contains("p_us")) p.p_us_override = o.at("p_us").get<double>();
  if (o.contains("p_s")) p.p_s_override = o.at("p_s").get<double>();
}

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("params: " + path + " must be positive and finite");
}

void check_probability(double v, const std::string& path) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("params: " + path + " must lie in [0, 1]");
}

void validate_subsystem(const SubsystemParams& p, const std::string& path) {
  check_positive(p.t1c_us, path + ".t1c_us");
  check_positive(p.t2rc_us, path + ".t2rc_us");
  check_positive(p.t2ec_us, path + ".t2ec_us");
  check_positive(p.t1t_us, path + ".t1t_us");
  check_positive(p.t2rt_us, path + ".t2rt_us");
  check_positive(p.t2et_us, path + ".t2et_us");
  check_positive(p.sigma_s_ns, path + ".sigma_s_ns");
  check_positive(p.sigma_us_ns, path + ".sigma_us_ns");
  check_positive(p.t_m_us, path + ".t_m_us");
  if (p.t_d_us < 0.0)
    throw std::invalid_argument("params: " + path + ".t_d_us must be non-negative");
  check_positive(p.t1_ro_us, path + ".t1_ro_us");
  check_probability(p.nth_c, path + ".nth_c");
  check_probability(p.nth_t, path + ".nth_t");
  check_probability(p.nth_ro, path + ".nth_ro");
  check_probability(p.p_ge, path + ".p_ge");
  check_probability(p.p_eg, path + ".p_eg");
  check_probability(p.eps_ocp, path + ".eps_ocp");
  if (p.t2rt_us > 2.0 * p.t1t_us + 1e-9)
    throw std::invalid_argument("params: " + path + ".t2rt_us exceeds 2*t1t_us");
  if (p.t2et_us > 2.0 * p.t1t_us + 1e-9)
    throw std::invalid_argument("params: " + path + ".t2et_us exceeds 2*t1t_us");
  if (p.t2rc_us > 2.0 * p.t1c_us + 1e-9)
    throw std::invalid_argument("params: " + path + ".t2rc_us exceeds 2*t1c_us");
  if (p.t2ec_us > 2.0 * p.t1c_us + 1e-9)
    throw std::invalid_argument("params: " + path + ".t2ec_us exceeds 2*t1c_us");
  if (p.p_us_override && !(*p.p_us_override >= 0.0 && *p.p_us_override <= 1.0))
    throw std::invalid_argument("params: " + path + " p_us override must lie in [0, 1]");
  if (p.p_s_override && !(*p.p_s_override >= 0.0 && *p.p_s_override <= 1.0))
    throw std::invalid_argument("params: " + path + " p_s override must lie in [0, 1]");
}

}  // namespace

double pure_dephasing_time(double t2_us, double t1_us) {
  const double rate = 1.0 / t2_us - 1.0 / (2.0 * t1_us);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / rate;
}

double SubsystemParams::tphi_t_us() const { return pure_dephasing_time(t2rt_us, t1t_us); }
double SubsystemParams::tphi_c_us() const { return pure_dephasing_time(t2rc_us, t1c_us); }

void HardwareParams::validate() const {
  validate_subsystem(alice, "subsystems.alice");
  validate_subsystem(bob, "subsystems.bob");
  if (gamma_phi_ramsey_per_us < 0.0)
    throw std::invalid_argument("params: dual_rail.gamma_phi_ramsey_per_us must be >= 0");
  if (gamma_phi_echo_per_us < 0.0)
    throw std::invalid_argument("params: dual_rail.gamma_phi_echo_per_us must be >= 0");
  check_positive(tau_ocp_us, "dual_rail.tau_ocp_us");
}

HardwareParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("params: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("params: failed to parse " + path + ": " + e.what());
  }
  if (!j.contains("subsystems"))
    throw std::invalid_argument("params: missing field subsystems");
  const json& subs = j.at("subsystems");
  if (!subs.contains("alice") || !subs.contains("bob"))
    throw std::invalid_argument("params: subsystems must contain alice and bob");
  HardwareParams hp;
  hp.alice = parse_subsystem(subs.at("alice"), "subsystems.alice");
  hp.bob = parse_subsystem(subs.at("bob"), "subsystems.bob");
  if (j.contains("dual_rail")) {
    const json& dr = j.at("dual_rail");
    hp.gamma_phi_ramsey_per_us =
        require_number(dr, "gamma_phi_ramsey_per_us", "dual_rail");
    hp.gamma_phi_echo_per_us = require_number(dr, "gamma_phi_echo_per_us", "dual_rail");
    hp.tau_ocp_us = require_number(dr, "tau_ocp_us", "dual_rail");
  }
  if (j.contains("pulse_overrides")) {
    parse_override(j.at("pulse_overrides"), "alice", hp.alice);
    parse_override(j.at("pulse_overrides"), "bob", hp.bob);
  }
  hp.validate();
  return hp;
}

HardwareParams default_params() {
  HardwareParams hp;

  SubsystemParams& a = hp.alice;
  a.chi_cm_mhz = -2.14;
  a.chi_cc_khz = -99.0;
  a.t1c_us = 592.0;
  a.t2rc_us = 768.0;
  a.t2ec_us = 932.0;
  a.nth_c = 3.5e-4;
  a.self_kerr_khz = -5.79;
  a.omega_c_ghz = 7.16;
  a.t1t_us = 125.0;
  a.t2rt_us = 92.0;
  a.t2et_us = 144.0;
  a.nth_t = 0.01;
  a.alpha_mhz = -184.63;
  a.omega_t_ghz = 4.83;
  a.sigma_s_ns = 300.0;
  a.sigma_us_ns = 16.0;
  a.t_m_us = 2.0;
  a.t_d_us = 0.4;
  a.t1_ro_us = 80.0;
  a.nth_ro = 0.02;
  a.p_ge = 1.00e-3;
  a.p_eg = 4.03e-3;
  a.eps_ocp = 2.53e-2;

  SubsystemParams& b = hp.bob;
  b.chi_cm_mhz = -3.72;
  b.chi_cc_khz = -110.0;
  b.t1c_us = 350.0;
  b.t2rc_us = 543.0;
  b.t2ec_us = 588.0;
  b.nth_c = 1.7e-4;
  b.self_kerr_khz = -11.02;
  b.omega_c_ghz = 6.76;
  b.t1t_us = 179.0;
  b.t2rt_us = 206.0;
  b.t2et_us = 303.0;
  b.nth_t = 0.01;
  b.alpha_mhz = -185.71;
  b.omega_t_ghz = 4.92;
  b.sigma_s_ns = 300.0;
  b.sigma_us_ns = 16.0;
  b.t_m_us = 3.6;
  b.t_d_us = 0.4;
  b.t1_ro_us = 100.0;
  b.nth_ro = 0.11;
  b.p_ge = 3.22e-3;
  b.p_eg = 1.18e-3;
  b.eps_ocp = 0.67e-2;

  hp.gamma_phi_ramsey_per_us = 1.0 / 2200.0;
  hp.gamma_phi_echo_per_us = 1.0 / 2700.0;
  hp.tau_ocp_us = 1.0;
  return hp;
}

HardwareParams zero_error_params() {
  HardwareParams hp = default_params();
  for (Subsystem s : {Subsystem::Bob, Subsystem::Alice}) {
    SubsystemParams& p = hp.sub(s);
    const double huge = 1e9;
    p.t1c_us = huge;
    p.t2rc_us = 2.0 * huge;
    p.t2ec_us = 2.0 * huge;
    p.nth_c = 0.0;
    p.t1t_us = huge;
    p.t2rt_us = 2.0 * huge;
    p.t2et_us = 2.0 * huge;
    p.nth_t = 0.0;
    p.t1_ro_us = huge;
    p.nth_ro = 0.0;
    p.p_ge = 0.0;
    p.p_eg = 0.0;
    p.eps_ocp = 0.0;
    p.p_us_override = 0.0;
    p.p_s_override = 0.0;
  }
  hp.gamma_phi_ramsey_per_us = 0.0;
  hp.gamma_phi_echo_per_us = 0.0;
  return hp;
}

}  // namespace dualrail
