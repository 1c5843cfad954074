#pragma once

#include "dualrail/fits.hpp"
#include "dualrail/protocols.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace dualrail {

// Generator pulses available to the Clifford compiler: beamsplitter quarter
// turns about the logical x and y axes.
struct RbGenerator {
  double theta = 0.0;
  double phi = 0.0;
};

inline constexpr std::array<RbGenerator, 4> kRbGenerators = {{
    {+1.5707963267948966, 0.0},                 // X90
    {-1.5707963267948966, 0.0},                 // -X90
    {+1.5707963267948966, 1.5707963267948966},  // Y90
    {-1.5707963267948966, 1.5707963267948966},  // -Y90
}};

// The 24-element single-qubit Clifford group on the logical basis
// {|0_L>, |1_L>}, each element carrying its 2x2 matrix and a shortest
// generator word found by breadth-first closure.
struct CliffordTable {
  struct Element {
    Eigen::Matrix2cd u;
    std::vector<int> word;  // indices into kRbGenerators
  };
  std::vector<Element> elements;

  // index of the element whose matrix inverts `net` up to a global phase
  int inverse_index(const Eigen::Matrix2cd& net) const;
};

const CliffordTable& clifford_table();

// 2x2 logical rotation implemented by one generator pulse
Eigen::Matrix2cd generator_matrix(const RbGenerator& g);

enum class RbNoise { None, Ambient, InjectedDepolarizing };

struct RbConfig {
  std::vector<int> depths;
  int sequences_per_depth = 5;
  std::uint64_t seed = 1;
  RbNoise noise = RbNoise::Ambient;
  double gate_time_us = 1.0;      // ambient window per generator pulse
  double depolarizing_r = 0.0;    // injected error per Clifford
};

struct RbPoint {
  int depth = 0;
  double survival = 0.0;  // postselected P(read |0_L>)
  double erasure_fraction = 0.0;
};

struct RbResult {
  std::vector<RbPoint> points;
  fits::DecayFit fit;
  double epc = 0.0;  // (1 - p)/2
};

// One full sequence at the given depth: random Cliffords, compiled inverse,
// single-round logical measurement; erasures are postselected out of the
// survival.
RbPoint run_rb_sequence(const ProtocolEngine& eng, int depth,
                        std::uint64_t sequence_seed, const RbConfig& cfg);

RbResult run_rb(const ProtocolEngine& eng, const RbConfig& cfg);

}  // namespace dualrail
