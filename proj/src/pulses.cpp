#include "dualrail/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace dualrail {

namespace {

constexpr double kPi = 3.14159265358979323846;

// area of the lifted envelope exp(-(t - c)^2 / (2 sigma^2)) - exp(-chop^2/8)
// over a chop*sigma window centered at c; the lift zeroes the edges so the
// spectral tails of the pulse stay well behaved.
double lifted_gaussian_area(double sigma, int chop) {
  const double half = 0.5 * chop;
  return sigma * (std::sqrt(2.0 * kPi) * std::erf(half / std::sqrt(2.0)) -
                  chop * std::exp(-0.5 * half * half));
}

// 2x2 propagator of H(t) = delta |e><e| + amplitude * Omega(t)/2 sigma_x in
// the (g, e) basis, with the free phase diag(1, exp(-i delta T)) divided out
// at the end. Fixed-step RK4, step <= 0.1 ns.
Eigen::Matrix2cd pulse_block_propagator(double sigma_us, int chop, double delta_rad,
                                        double amplitude) {
  if (sigma_us <= 0.0) throw std::invalid_argument("pulse propagator: sigma <= 0");
  if (chop <= 0) throw std::invalid_argument("pulse propagator: chop <= 0");
  const double window = chop * sigma_us;
  const double amp = amplitude * kPi / lifted_gaussian_area(sigma_us, chop);
  const double lift = std::exp(-0.125 * static_cast<double>(chop) * chop);

  auto envelope = [&](double t) {
    const double x = (t - 0.5 * window) / sigma_us;
    return amp * (std::exp(-0.5 * x * x) - lift);
  };

  const complexd minus_i(0.0, -1.0);
  auto rhs = [&](const Eigen::Matrix2cd& u, double omega) -> Eigen::Matrix2cd {
    Eigen::Matrix2cd h;
    h << 0.0, 0.5 * omega, 0.5 * omega, delta_rad;
    return minus_i * (h * u);
  };

  const double dt = std::min(1e-4, window / 1000.0);
  const int steps = static_cast<int>(std::ceil(window / dt));
  const double h = window / steps;

  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  double t = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double w1 = envelope(t);
    const double w2 = envelope(t + 0.5 * h);
    const double w4 = envelope(t + h);
    const Eigen::Matrix2cd k1 = rhs(u, w1);
    const Eigen::Matrix2cd k2 = rhs(u + 0.5 * h * k1, w2);
    const Eigen::Matrix2cd k3 = rhs(u + 0.5 * h * k2, w2);
    const Eigen::Matrix2cd k4 = rhs(u + h * k3, w4);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  // undo the free dispersive phase accumulated by |e>
  u.row(1) *= std::exp(complexd(0.0, delta_rad * window));
  return u;
}

}  // namespace

double gaussian_pi_pulse_flip(double sigma_us, double detuning_mhz) {
  const Eigen::Matrix2cd u =
      pulse_block_propagator(sigma_us, 4, 2.0 * kPi * detuning_mhz, 1.0);
  const double pg = std::norm(u(0, 0));
  const double pe = std::norm(u(1, 0));
  return pe / (pg + pe);
}

Matrix gaussian_pulse_propagate(const SpaceLayout& space, Mode transmon, double sigma_us,
                                int chop, double detuning_mhz, double chi_mhz,
                                double amplitude) {
  if (!is_transmon(transmon))
    throw std::invalid_argument("gaussian_pulse_propagate: target is not a transmon mode");
  const Mode cavity = cavity_of(subsystem_of(transmon));
  const int cavity_dim = space.mode_dim(cavity);
  Matrix full = Matrix::Zero(space.dim(), space.dim());
  for (int n = 0; n < cavity_dim; ++n) {
    const double delta_rad = 2.0 * kPi * (chi_mhz * n - detuning_mhz);
    const Eigen::Matrix2cd block =
        pulse_block_propagator(sigma_us, chop, delta_rad, amplitude);
    Matrix block2(2, 2);
    block2 << block(0, 0), block(0, 1), block(1, 0), block(1, 1);
    Matrix pn = Matrix::Zero(cavity_dim, cavity_dim);
    pn(n, n) = 1.0;
    full += space.embed(cavity, pn) * space.embed(transmon, block2);
  }
  return full;
}

PulseErrors pulse_errors(const SubsystemParams& p) {
  if (p.p_us_override && p.p_s_override) return {*p.p_us_override, *p.p_s_override};

  static std::mutex mu;
  static std::map<std::tuple<double, double, double>, PulseErrors> cache;

  const double chi = std::abs(p.chi_cm_mhz);
  const std::tuple<double, double, double> key{p.sigma_s_ns, p.sigma_us_ns, chi};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      PulseErrors pe = it->second;
      if (p.p_us_override) pe.p_us = *p.p_us_override;
      if (p.p_s_override) pe.p_s = *p.p_s_override;
      return pe;
    }
  }

  PulseErrors pe;
  pe.p_us = gaussian_pi_pulse_flip(p.sigma_s_ns * 1e-3, chi);
  pe.p_s = 1.0 - gaussian_pi_pulse_flip(p.sigma_us_ns * 1e-3, chi);

  {
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = pe;
  }
  if (p.p_us_override) pe.p_us = *p.p_us_override;
  if (p.p_s_override) pe.p_s = *p.p_s_override;
  return pe;
}

PulseErrors pulse_selectivity_errors(const HardwareParams& hp, Subsystem s) {
  return pulse_errors(hp.sub(s));
}

}  // namespace dualrail
