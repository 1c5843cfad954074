#include "dualrail/branch.hpp"

#include <algorithm>

namespace dualrail {

double BranchSet::total_weight() const {
  double w = pruned_mass;
  for (const auto& b : branches) w += b.weight;
  return w;
}

double BranchSet::live_weight() const {
  double w = 0.0;
  for (const auto& b : branches)
    if (b.live()) w += b.weight;
  return w;
}

void BranchSet::prune(double tol) {
  double dropped = 0.0;
  auto keep = std::remove_if(branches.begin(), branches.end(),
                             [&](const Branch& b) {
                               if (b.weight < tol) {
                                 dropped += b.weight;
                                 return true;
                               }
                               return false;
                             });
  branches.erase(keep, branches.end());
  pruned_mass += dropped;
}

}  // namespace dualrail
