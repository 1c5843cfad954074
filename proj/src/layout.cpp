#include "dualrail/layout.hpp"

#include <cmath>
#include <stdexcept>

namespace dualrail {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SpaceLayout SpaceLayout::build(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("SpaceLayout: need at least one mode");
  for (int d : dims)
    if (d < 2) throw std::invalid_argument("SpaceLayout: mode dimension must be >= 2");
  SpaceLayout s;
  s.dims_ = dims;
  s.strides_.assign(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    s.strides_[k] = s.strides_[k + 1] * dims[k + 1];
  s.dim_ = s.strides_[0] * dims[0];
  return s;
}

int SpaceLayout::index(const std::vector<int>& occ) const {
  if (occ.size() != dims_.size())
    throw std::invalid_argument("SpaceLayout::index: wrong number of occupations");
  int idx = 0;
  for (size_t k = 0; k < occ.size(); ++k) {
    if (occ[k] < 0 || occ[k] >= dims_[k])
      throw std::out_of_range("SpaceLayout::index: occupation out of range");
    idx += occ[k] * strides_[k];
  }
  return idx;
}

std::vector<int> SpaceLayout::occupations(int index) const {
  if (index < 0 || index >= dim_) throw std::out_of_range("SpaceLayout::occupations");
  std::vector<int> occ(dims_.size());
  for (size_t k = 0; k < dims_.size(); ++k) {
    occ[k] = (index / strides_[k]) % dims_[k];
  }
  return occ;
}

int SpaceLayout::occupation(int index, int mode) const {
  return (index / strides_.at(mode)) % dims_.at(mode);
}

Matrix SpaceLayout::embed(int mode, const Matrix& op) const {
  if (op.rows() != dims_.at(mode) || op.cols() != dims_.at(mode))
    throw std::invalid_argument("SpaceLayout::embed: operator does not match mode dim");
  Matrix full = Matrix::Identity(1, 1);
  for (int k = 0; k < n_modes(); ++k) {
    if (k == mode)
      full = kron(full, op);
    else
      full = kron(full, Matrix::Identity(dims_[k], dims_[k]));
  }
  return full;
}

Matrix SpaceLayout::mode_operator(int mode, ModeOp kind) const {
  const int d = dims_.at(mode);
  Matrix op = Matrix::Zero(d, d);
  switch (kind) {
    case ModeOp::Annihilation:
      for (int n = 1; n < d; ++n) op(n - 1, n) = std::sqrt(static_cast<double>(n));
      break;
    case ModeOp::Number:
      for (int n = 0; n < d; ++n) op(n, n) = n;
      break;
    case ModeOp::Projector0:
      op(0, 0) = 1.0;
      break;
    case ModeOp::Projector1:
      op(1, 1) = 1.0;
      break;
    case ModeOp::PauliX:
      if (d != 2) throw std::invalid_argument("PauliX needs a two-level mode");
      op(0, 1) = 1.0;
      op(1, 0) = 1.0;
      break;
    case ModeOp::PauliZ:
      if (d != 2) throw std::invalid_argument("PauliZ needs a two-level mode");
      op(0, 0) = 1.0;
      op(1, 1) = -1.0;
      break;
  }
  return op;
}

SpaceLayout default_layout() { return SpaceLayout::build({2, 2, 2, 2}); }

Vector basis_ket(const SpaceLayout& space, const std::vector<int>& occ) {
  Vector v = Vector::Zero(space.dim());
  v(space.index(occ)) = 1.0;
  return v;
}

Matrix pure_density(const Vector& psi) { return psi * psi.adjoint(); }

}  // namespace dualrail
