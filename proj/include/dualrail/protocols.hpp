#pragma once

#include "dualrail/branch.hpp"
#include "dualrail/decoder.hpp"
#include "dualrail/params.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dualrail {

// Per-mode relaxation environment for one evolution window. tphi follows the
// dephasing_kraus convention (coherence damped by exp(-2 t / tphi)); +inf
// disables that channel. gamma_phi_per_us is the collective cavity-pair
// dephasing rate: the |01>,|10> coherence decays as exp(-gamma_phi t).
// detuning_mhz advances the |10> phase relative to |01> at 2 pi delta t.
struct WindowEnv {
  std::array<double, 4> t1{};
  std::array<double, 4> nth{};
  std::array<double, 4> tphi{};
  double gamma_phi_per_us = 0.0;
  double detuning_mhz = 0.0;
};

enum class PrepMethod { CheckOnly, CavityChecks };

// Deterministic single-fault injection for propagation tests. Jump faults
// fire immediately before the evolution window with the given index;
// ClassificationFlip corrupts the recorded outcome of the chosen subsystem's
// readout inside the readout wall with the given index (the projected state
// is untouched, only the classical label flips).
struct FaultPlan {
  enum class Kind {
    CavityDecay,
    CavityHeat,
    TransmonDecay,
    TransmonHeat,
    ClassificationFlip
  };
  Kind kind = Kind::TransmonDecay;
  Subsystem subsystem = Subsystem::Bob;
  int slot = 0;
};

// Analytic branch-tracking evolution of the four-mode register through the
// dual-rail protocols. Measurements split branches on transmon outcomes;
// failed checks seal branches so their classification is frozen.
class ProtocolEngine {
 public:
  explicit ProtocolEngine(const HardwareParams& hp);

  const SpaceLayout& space() const { return space_; }
  const HardwareParams& params() const { return hp_; }

  // schedule walls (both subsystems run concurrently, end-aligned)
  double readout_wall_us() const;  // max transmon measurement duration
  double dead_time_us() const;     // max post-readout delay
  double map_wall_us() const;
  double reset_wall_us() const;
  // one measurement round: map + readout wall (+ optional post-reset check)
  double round_duration_us(bool with_check) const;

  WindowEnv ambient() const;

  // --- primitives; all of them skip sealed branches ---
  void apply_window(BranchSet& set, const WindowEnv& env,
                    double duration_us) const;
  // ambient window with an optional cavity-pair detuning and an override of
  // the collective dephasing rate (used by the coherence experiments)
  void idle(BranchSet& set, double duration_us, double detuning_mhz = 0.0,
            std::optional<double> gamma_phi_per_us = std::nullopt) const;
  void apply_gate(BranchSet& set, const Matrix& u) const;
  // selective mapping pulses on both transmons inside symmetric ambient
  // windows; resonant_b/resonant_a select the cavity Fock state that flips
  // each transmon (the logical measurement maps n = 1 to |e>)
  void mapping_step(BranchSet& set, int resonant_b = 1,
                    int resonant_a = 1) const;
  // simultaneous end-aligned readout of both transmons, including the
  // post-readout dead time; records carry the given step label
  void readout_step(BranchSet& set, const std::string& label) const;
  // unselective pi-pulse on each transmon whose readout under read_label
  // said E, inside symmetric ambient windows
  void reset_step(BranchSet& set, const std::string& read_label) const;
  // seals every live branch holding a record under `label` that differs
  // from `expected`
  void seal_on_mismatch(BranchSet& set, const std::string& label,
                        char expected, Seal seal) const;

  // --- protocol blocks ---
  // Seeds the register with the analytic post-reset / post-loading state
  // for the requested photon pattern, applies the loading idle, then the
  // prep-stage checks (transmon check, plus five cavity checks for
  // PrepMethod::CavityChecks). Check mismatches seal as FPC.
  BranchSet prepare_logical(int photon_b, int photon_a,
                            PrepMethod method) const;
  // pre-measurement transmon check (check0, failures seal as FMC) followed
  // by `rounds` logical measurement rounds; each round is mapping, readout,
  // conditional reset and, when rounds >= 2, a post-reset transmon check
  void logical_measurement(BranchSet& set, int rounds) const;
  // decode plan matching the labels emitted by the blocks above
  DecodePlan plan(int rounds, PrepMethod method) const;

  // --- fault injection ---
  void arm_fault(const FaultPlan& fault) const;
  void disarm_fault() const;
  int windows_used() const { return window_counter_; }
  int readouts_used() const { return readout_counter_; }
  void reset_fault_counters() const;

  double prune_tol() const { return prune_tol_; }
  void set_prune_tol(double tol) { prune_tol_ = tol; }

 private:
  void maybe_fire_jump_fault(BranchSet& set) const;
  void povm_split(BranchSet& set, Subsystem s, const std::string& label,
                  bool flip_record) const;
  void apply_map_arms(BranchSet& set, Subsystem s, int resonant_photon) const;

  SpaceLayout space_;
  HardwareParams hp_;
  double prune_tol_ = 1e-12;

  // cached full-space operators, indexed by subsystem
  std::array<Matrix, 2> povm_g_, povm_e_;
  std::array<Matrix, 2> x_t_;      // unselective transmon flip
  std::array<Matrix, 2> u_map_1_;  // selective flip resonant on n = 1
  std::array<Matrix, 2> u_map_0_;  // selective flip resonant on n = 0
  std::array<double, 2> p_us_{}, p_s_{}, p_mf_{};
  Eigen::VectorXd dr_weights_;

  // fault bookkeeping only; steps stay const
  mutable std::optional<FaultPlan> fault_;
  mutable int window_counter_ = 0;
  mutable int readout_counter_ = 0;
};

// --- experiment drivers ---

// Exact outcome distribution: one leaf per surviving branch with its record.
struct LeafDistribution {
  struct Leaf {
    double weight = 0.0;
    std::vector<OutcomeRecord> records;
  };
  std::vector<Leaf> leaves;
  double pruned_mass = 0.0;
  DecodePlan plan;

  double total_weight() const;
  Metrics tally() const;  // decode every leaf, weights as masses
};

LeafDistribution distill(const BranchSet& set, const DecodePlan& plan);

// multinomial sampling over the leaves, deterministic in the seed
Metrics sample_counts(const LeafDistribution& dist, std::uint64_t shots,
                      std::uint64_t seed);
std::vector<std::vector<OutcomeRecord>> sample_records(
    const LeafDistribution& dist, std::uint64_t shots, std::uint64_t seed);

// prepare the photon pattern, then measure with the given number of rounds
LeafDistribution run_spam(const ProtocolEngine& eng, int photon_b,
                          int photon_a, int rounds,
                          PrepMethod method = PrepMethod::CheckOnly);

// prepare, idle for each delay, then a single measurement round; used for
// the bit-flip scans (logical preps) and the heating scan (vacuum prep)
struct DelayScanPoint {
  double delay_us = 0.0;
  Metrics metrics;
  double pruned_mass = 0.0;
};
std::vector<DelayScanPoint> run_delay_scan(
    const ProtocolEngine& eng, int photon_b, int photon_a,
    const std::vector<double>& delays_us,
    PrepMethod method = PrepMethod::CheckOnly, int rounds = 1);

}  // namespace dualrail
