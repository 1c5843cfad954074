#pragma once

#include "dualrail/layout.hpp"

namespace dualrail {

// Unitary generated by the cavity-pair beamsplitter coupling
//   G = e^{i phi} b^dag a + e^{-i phi} b a^dag
// with rotation angle theta: U = exp(-i theta/2 G). Restricted to the
// single-photon span {|01>, |10>} this is a qubit rotation by theta about the
// equatorial axis (cos phi, sin phi, 0); |00> and |11> are left invariant.
Matrix beamsplitter_unitary(const SpaceLayout& space, double theta, double phi);

// applies the beamsplitter rotation to a density matrix
Matrix beamsplitter_rotation(const SpaceLayout& space, const Matrix& rho, double theta,
                             double phi);

}  // namespace dualrail
