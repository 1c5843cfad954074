#include "dualrail/gates.hpp"

#include <complex>

namespace dualrail {

Matrix beamsplitter_unitary(const SpaceLayout& space, double theta, double phi) {
  const Matrix b =
      space.embed(Mode::CavityB, space.mode_operator(Mode::CavityB, ModeOp::Annihilation));
  const Matrix a =
      space.embed(Mode::CavityA, space.mode_operator(Mode::CavityA, ModeOp::Annihilation));
  const complexd phase = std::exp(complexd(0.0, phi));
  const Matrix g = phase * b.adjoint() * a + std::conj(phase) * b * a.adjoint();

  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const auto& vals = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  Vector exp_vals(vals.size());
  for (int i = 0; i < vals.size(); ++i)
    exp_vals(i) = std::exp(complexd(0.0, -0.5 * theta * vals(i)));
  return vecs * exp_vals.asDiagonal() * vecs.adjoint();
}

Matrix beamsplitter_rotation(const SpaceLayout& space, const Matrix& rho, double theta,
                             double phi) {
  const Matrix u = beamsplitter_unitary(space, theta, phi);
  return u * rho * u.adjoint();
}

}  // namespace dualrail
