#include "dualrail/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualrail {

Matrix Lindblad::derivative(const Matrix& rho) const {
  const complexd minus_i(0.0, -1.0);
  Matrix d = Matrix::Zero(rho.rows(), rho.cols());
  if (h.size() > 0) d = minus_i * (h * rho - rho * h);
  for (const Matrix& c : collapse) {
    const Matrix cdc = c.adjoint() * c;
    d += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
  }
  return d;
}

Matrix Lindblad::evolve(Matrix rho, double duration_us, double dt_us) const {
  if (duration_us < 0.0) throw std::invalid_argument("Lindblad::evolve: negative duration");
  if (duration_us == 0.0) return rho;
  if (dt_us <= 0.0) dt_us = std::min(0.01, duration_us / 100.0);
  const int steps = std::max(1, static_cast<int>(std::ceil(duration_us / dt_us)));
  const double dt = duration_us / steps;
  for (int s = 0; s < steps; ++s) {
    const Matrix k1 = derivative(rho);
    const Matrix k2 = derivative(rho + 0.5 * dt * k1);
    const Matrix k3 = derivative(rho + 0.5 * dt * k2);
    const Matrix k4 = derivative(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

std::vector<Matrix> thermal_collapse(const SpaceLayout& space, Mode m, double t1_us,
                                     double n_th) {
  std::vector<Matrix> ops;
  const Matrix a = space.embed(m, space.mode_operator(m, ModeOp::Annihilation));
  const double down = (1.0 - n_th) / t1_us;
  const double up = n_th / t1_us;
  if (down > 0.0) ops.push_back(std::sqrt(down) * a);
  if (up > 0.0) ops.push_back(std::sqrt(up) * a.adjoint());
  return ops;
}

}  // namespace dualrail
