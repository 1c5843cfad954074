#include "dualrail/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace dualrail {

void KrausSet::check_complete(double tol) const {
  if (ops.empty()) throw std::logic_error("KrausSet '" + label + "' is empty");
  const Eigen::Index d = ops.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& k : ops) sum += k.adjoint() * k;
  const double err = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > tol)
    throw std::logic_error("KrausSet '" + label + "' is not trace preserving, defect " +
                           std::to_string(err));
}

Matrix apply_kraus(const KrausSet& k, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& op : k.ops) out += op * rho * op.adjoint();
  return out;
}

Matrix apply_unitary(const Matrix& u, const Matrix& rho) { return u * rho * u.adjoint(); }

KrausSet gad_kraus(double duration_us, double t1_us, double n_th) {
  if (duration_us < 0.0) throw std::invalid_argument("gad_kraus: negative duration");
  if (n_th < 0.0 || n_th > 1.0) throw std::invalid_argument("gad_kraus: n_th outside [0,1]");
  const double p = std::isfinite(t1_us) ? 1.0 - std::exp(-duration_us / t1_us) : 0.0;
  const double sp = std::sqrt(p);
  const double sq = std::sqrt(1.0 - p);
  const double sn = std::sqrt(n_th);
  const double sm = std::sqrt(1.0 - n_th);

  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = sm;
  k0(1, 1) = sm * sq;
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = sm * sp;
  Matrix k2 = Matrix::Zero(2, 2);
  k2(0, 0) = sn * sq;
  k2(1, 1) = sn;
  Matrix k3 = Matrix::Zero(2, 2);
  k3(1, 0) = sn * sp;

  KrausSet set{{k0, k1, k2, k3}, "gad"};
  set.check_complete();
  return set;
}

KrausSet dephasing_kraus(double duration_us, double t_phi_us) {
  if (duration_us < 0.0) throw std::invalid_argument("dephasing_kraus: negative duration");
  const double q =
      std::isfinite(t_phi_us) ? 0.5 * (1.0 - std::exp(-2.0 * duration_us / t_phi_us)) : 0.0;
  Matrix id = Matrix::Identity(2, 2);
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  KrausSet set{{std::sqrt(1.0 - q) * id, std::sqrt(q) * z}, "dephasing"};
  set.check_complete();
  return set;
}

KrausSet embed_kraus(const SpaceLayout& space, int mode, const KrausSet& local) {
  KrausSet out;
  out.label = local.label;
  out.ops.reserve(local.ops.size());
  for (const Matrix& k : local.ops) out.ops.push_back(space.embed(mode, k));
  return out;
}

std::pair<Matrix, Matrix> assignment_povm(double p_ge, double p_eg) {
  if (p_ge < 0.0 || p_ge > 1.0 || p_eg < 0.0 || p_eg > 1.0)
    throw std::invalid_argument("assignment_povm: probabilities outside [0,1]");
  Matrix pg = Matrix::Zero(2, 2);
  pg(0, 0) = std::sqrt(1.0 - p_ge);
  pg(1, 1) = std::sqrt(p_eg);
  Matrix pe = Matrix::Zero(2, 2);
  pe(0, 0) = std::sqrt(p_ge);
  pe(1, 1) = std::sqrt(1.0 - p_eg);
  return {pg, pe};
}

Matrix apply_weighted_dephasing(const Matrix& rho, const Eigen::VectorXd& weights,
                                double gamma_per_us, double duration_us) {
  if (weights.size() != rho.rows())
    throw std::invalid_argument("apply_weighted_dephasing: weight size mismatch");
  Matrix out = rho;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      const double d = weights(i) - weights(j);
      if (d != 0.0)
        out(i, j) *= std::exp(-0.5 * gamma_per_us * duration_us * d * d);
    }
  }
  return out;
}

Eigen::VectorXd dualrail_dephasing_weights(const SpaceLayout& space) {
  Eigen::VectorXd w(space.dim());
  for (int i = 0; i < space.dim(); ++i)
    w(i) = space.occupation(i, Mode::CavityB) - space.occupation(i, Mode::CavityA);
  return w;
}

Eigen::VectorXd mode_occupation_weights(const SpaceLayout& space, Mode m) {
  Eigen::VectorXd w(space.dim());
  for (int i = 0; i < space.dim(); ++i) w(i) = space.occupation(i, m);
  return w;
}

Matrix diagonal_phase_unitary(const SpaceLayout& space, const Eigen::VectorXd& weights,
                              double angle) {
  if (weights.size() != space.dim())
    throw std::invalid_argument("diagonal_phase_unitary: weight size mismatch");
  Matrix u = Matrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i)
    u(i, i) = std::exp(complexd(0.0, -angle * weights(i)));
  return u;
}

}  // namespace dualrail
