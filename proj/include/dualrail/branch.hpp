#pragma once

#include "dualrail/layout.hpp"

#include <string>
#include <vector>

namespace dualrail {

// one labeled measurement outcome inside a shot record
struct OutcomeRecord {
  std::string step;
  Subsystem subsystem;
  char outcome;  // 'G' or 'E'
};

// Sealed branches have a classification that later steps can no longer
// change (failed prep or measurement check), so the engine stops evolving
// them; their weight still counts toward the outcome distribution.
enum class Seal { None, FPC, FMC };

struct Branch {
  double weight = 1.0;
  Matrix rho;  // normalized to unit trace
  std::vector<OutcomeRecord> records;
  Seal seal = Seal::None;

  bool live() const { return seal == Seal::None; }
};

struct BranchSet {
  std::vector<Branch> branches;
  double pruned_mass = 0.0;

  double total_weight() const;  // branch weights plus pruned mass
  double live_weight() const;

  // drops branches with weight below tol into pruned_mass
  void prune(double tol);
};

}  // namespace dualrail
