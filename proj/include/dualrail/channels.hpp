#pragma once

#include "dualrail/layout.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dualrail {

struct KrausSet {
  std::vector<Matrix> ops;
  std::string label;

  // verifies sum K^dag K = I, throws std::logic_error on failure
  void check_complete(double tol = 1e-10) const;
};

Matrix apply_kraus(const KrausSet& k, const Matrix& rho);
Matrix apply_unitary(const Matrix& u, const Matrix& rho);

// Generalized amplitude damping on one two-level mode: total relaxation rate
// 1/t1, stationary excited population n_th.
KrausSet gad_kraus(double duration_us, double t1_us, double n_th);

// Phase damping on one two-level mode, Kraus form {sqrt(1-q) I, sqrt(q) Z}
// with q = (1 - exp(-2 duration / t_phi)) / 2, so the coherence is damped by
// exp(-2 duration / t_phi).
KrausSet dephasing_kraus(double duration_us, double t_phi_us);

// embeds each Kraus operator of a single-mode set into the full register
KrausSet embed_kraus(const SpaceLayout& space, int mode, const KrausSet& local);
inline KrausSet embed_kraus(const SpaceLayout& space, Mode m, const KrausSet& local) {
  return embed_kraus(space, mode_index(m), local);
}

// Two-outcome measurement operators for a dispersive transmon readout with
// assignment errors: first matrix heralds G, second heralds E.
// p_ge = P(E | g), p_eg = P(G | e). Both are 2x2 and satisfy
// Pi_G^dag Pi_G + Pi_E^dag Pi_E = I.
std::pair<Matrix, Matrix> assignment_povm(double p_ge, double p_eg);

// Exact dephasing of a diagonal collapse operator sqrt(gamma) * diag(w):
// rho_ij -> rho_ij * exp(-gamma * t * (w_i - w_j)^2 / 2).
Matrix apply_weighted_dephasing(const Matrix& rho, const Eigen::VectorXd& weights,
                                double gamma_per_us, double duration_us);

// per-basis-state weights n_B - n_A for the collective cavity-pair channel
Eigen::VectorXd dualrail_dephasing_weights(const SpaceLayout& space);

// occupation of one mode as a weight vector (single-mode dephasing)
Eigen::VectorXd mode_occupation_weights(const SpaceLayout& space, Mode m);

// diag(exp(-i * angle * w_k)); with w = dualrail weights and
// angle = pi * delta_mhz * t_us this advances the |01>,|10> relative phase by
// 2 pi * delta * t (|10> rotates forward for positive delta).
Matrix diagonal_phase_unitary(const SpaceLayout& space, const Eigen::VectorXd& weights,
                              double angle);

}  // namespace dualrail
