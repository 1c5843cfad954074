#pragma once

#include "dualrail/layout.hpp"

#include <vector>

namespace dualrail {

// Master equation in Lindblad form,
//   drho/dt = -i [H, rho] + sum_k ( C_k rho C_k^dag - {C_k^dag C_k, rho} / 2 ),
// integrated with fixed-step RK4. H is in angular units (rad/us).
struct Lindblad {
  Matrix h;
  std::vector<Matrix> collapse;

  Matrix derivative(const Matrix& rho) const;
  // dt_us <= 0 selects min(0.01 us, duration / 100)
  Matrix evolve(Matrix rho, double duration_us, double dt_us = 0.0) const;
};

// thermal relaxation pair for one mode: sqrt((1-n_th)/t1) a  and  sqrt(n_th/t1) a^dag
std::vector<Matrix> thermal_collapse(const SpaceLayout& space, Mode m, double t1_us,
                                     double n_th);

}  // namespace dualrail
