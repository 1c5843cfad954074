#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace dualrail {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using complexd = std::complex<double>;

// Mode ordering of the four-mode register. Mode 0 is the most significant
// digit of a basis-state label, so with dims (2,2,2,2) the basis index
// 0b1010 = 10 has one photon in each cavity and both transmons in g.
enum class Mode : int { CavityB = 0, TransmonB = 1, CavityA = 2, TransmonA = 3 };

enum class Subsystem : int { Bob = 0, Alice = 1 };

constexpr int mode_index(Mode m) { return static_cast<int>(m); }

inline Mode cavity_of(Subsystem s) {
  return s == Subsystem::Bob ? Mode::CavityB : Mode::CavityA;
}
inline Mode transmon_of(Subsystem s) {
  return s == Subsystem::Bob ? Mode::TransmonB : Mode::TransmonA;
}
inline const char* subsystem_tag(Subsystem s) {
  return s == Subsystem::Bob ? "B" : "A";
}
inline Subsystem other(Subsystem s) {
  return s == Subsystem::Bob ? Subsystem::Alice : Subsystem::Bob;
}
inline Subsystem subsystem_of(Mode m) {
  return (m == Mode::CavityB || m == Mode::TransmonB) ? Subsystem::Bob : Subsystem::Alice;
}
inline bool is_transmon(Mode m) { return m == Mode::TransmonB || m == Mode::TransmonA; }

enum class ModeOp { Annihilation, Number, Projector0, Projector1, PauliX, PauliZ };

Matrix kron(const Matrix& a, const Matrix& b);

class SpaceLayout {
 public:
  static SpaceLayout build(const std::vector<int>& dims);

  int n_modes() const { return static_cast<int>(dims_.size()); }
  int dim() const { return dim_; }
  int mode_dim(int mode) const { return dims_.at(mode); }
  int mode_dim(Mode m) const { return mode_dim(mode_index(m)); }

  // basis index for a full set of per-mode occupations
  int index(const std::vector<int>& occ) const;
  // per-mode occupations for a basis index
  std::vector<int> occupations(int index) const;
  int occupation(int index, int mode) const;
  int occupation(int index, Mode m) const { return occupation(index, mode_index(m)); }

  // single-mode operator embedded into the full space
  Matrix embed(int mode, const Matrix& op) const;
  Matrix embed(Mode m, const Matrix& op) const { return embed(mode_index(m), op); }
  Matrix mode_operator(int mode, ModeOp kind) const;
  Matrix mode_operator(Mode m, ModeOp kind) const {
    return mode_operator(mode_index(m), kind);
  }

  Matrix identity() const { return Matrix::Identity(dim_, dim_); }

 private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int dim_ = 0;
};

// the standard register: cavity B, transmon B, cavity A, transmon A, all two-level
SpaceLayout default_layout();

Vector basis_ket(const SpaceLayout& space, const std::vector<int>& occ);
Matrix pure_density(const Vector& psi);

}  // namespace dualrail
