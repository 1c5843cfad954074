#include "dualrail/protocols.hpp"

#include "dualrail/budget.hpp"
#include "dualrail/channels.hpp"
#include "dualrail/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dualrail {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeEps = 1e-9;

int sub_index(Subsystem s) { return static_cast<int>(s); }

const std::array<Subsystem, 2> kSubOrder = {Subsystem::Bob, Subsystem::Alice};

}  // namespace

ProtocolEngine::ProtocolEngine(const HardwareParams& hp)
    : space_(default_layout()), hp_(hp) {
  hp_.validate();
  dr_weights_ = dualrail_dephasing_weights(space_);

  for (Subsystem s : kSubOrder) {
    const int i = sub_index(s);
    const SubsystemParams& sp = hp_.sub(s);
    const Mode cav = cavity_of(s);
    const Mode tr = transmon_of(s);

    auto [pg, pe] = assignment_povm(sp.p_ge, sp.p_eg);
    povm_g_[i] = space_.embed(tr, pg);
    povm_e_[i] = space_.embed(tr, pe);

    const Matrix x = space_.embed(tr, space_.mode_operator(tr, ModeOp::PauliX));
    const Matrix p0 = space_.embed(cav, space_.mode_operator(cav, ModeOp::Projector0));
    const Matrix p1 = space_.embed(cav, space_.mode_operator(cav, ModeOp::Projector1));
    x_t_[i] = x;
    u_map_1_[i] = p1 * x + p0;
    u_map_0_[i] = p0 * x + p1;

    const PulseErrors pe_sel = pulse_selectivity_errors(hp_, s);
    p_us_[i] = pe_sel.p_us;
    p_s_[i] = pe_sel.p_s;
    // incoherent flip of the mapping outcome from transmon dephasing while
    // the selective pulse rotates the resonant component
    p_mf_[i] = 0.5 * (1.0 - std::exp(-sp.t_map_us() / (2.0 * sp.tphi_t_us())));
  }
}

double ProtocolEngine::readout_wall_us() const {
  return std::max(hp_.bob.t_m_us, hp_.alice.t_m_us);
}

double ProtocolEngine::dead_time_us() const {
  return std::max(hp_.bob.t_d_us, hp_.alice.t_d_us);
}

double ProtocolEngine::map_wall_us() const {
  return std::max(hp_.bob.t_map_us(), hp_.alice.t_map_us());
}

double ProtocolEngine::reset_wall_us() const {
  return std::max(hp_.bob.t_reset_us(), hp_.alice.t_reset_us());
}

double ProtocolEngine::round_duration_us(bool with_check) const {
  const double wall = readout_wall_us() + dead_time_us();
  double d = map_wall_us() + wall + reset_wall_us();
  if (with_check) d += wall;
  return d;
}

WindowEnv ProtocolEngine::ambient() const {
  WindowEnv env;
  for (Subsystem s : kSubOrder) {
    const SubsystemParams& sp = hp_.sub(s);
    const int cav = mode_index(cavity_of(s));
    const int tr = mode_index(transmon_of(s));
    env.t1[cav] = sp.t1c_us;
    env.nth[cav] = sp.nth_c;
    // single-cavity dephasing is carried by the measured collective rate
    env.tphi[cav] = kInf;
    env.t1[tr] = sp.t1t_us;
    env.nth[tr] = sp.nth_t;
    env.tphi[tr] = 2.0 * sp.tphi_t_us();
  }
  env.gamma_phi_per_us = hp_.gamma_phi_ramsey_per_us;
  return env;
}

void ProtocolEngine::apply_window(BranchSet& set, const WindowEnv& env,
                                  double duration_us) const {
  if (duration_us <= 0.0) return;
  maybe_fire_jump_fault(set);
  ++window_counter_;

  std::vector<KrausSet> channels;
  for (int m = 0; m < space_.n_modes(); ++m) {
    if (std::isfinite(env.t1[m]) && env.t1[m] > 0.0)
      channels.push_back(embed_kraus(
          space_, m, gad_kraus(duration_us, env.t1[m], env.nth[m])));
    if (std::isfinite(env.tphi[m]) && env.tphi[m] > 0.0)
      channels.push_back(
          embed_kraus(space_, m, dephasing_kraus(duration_us, env.tphi[m])));
  }

  Matrix phase;
  if (env.detuning_mhz != 0.0)
    phase = diagonal_phase_unitary(space_, dr_weights_,
                                   kPi * env.detuning_mhz * duration_us);

  for (auto& b : set.branches) {
    if (!b.live()) continue;
    for (const auto& ch : channels) b.rho = apply_kraus(ch, b.rho);
    if (env.gamma_phi_per_us > 0.0)
      b.rho = apply_weighted_dephasing(b.rho, dr_weights_,
                                       env.gamma_phi_per_us / 2.0, duration_us);
    if (env.detuning_mhz != 0.0) b.rho = apply_unitary(phase, b.rho);
  }
}

void ProtocolEngine::idle(BranchSet& set, double duration_us,
                          double detuning_mhz,
                          std::optional<double> gamma_phi_per_us) const {
  WindowEnv env = ambient();
  env.detuning_mhz = detuning_mhz;
  if (gamma_phi_per_us) env.gamma_phi_per_us = *gamma_phi_per_us;
  apply_window(set, env, duration_us);
}

void ProtocolEngine::apply_gate(BranchSet& set, const Matrix& u) const {
  for (auto& b : set.branches)
    if (b.live()) b.rho = apply_unitary(u, b.rho);
}

void ProtocolEngine::apply_map_arms(BranchSet& set, Subsystem s,
                                    int resonant_photon) const {
  if (resonant_photon != 0 && resonant_photon != 1)
    throw std::invalid_argument("resonant photon number must be 0 or 1");
  const int i = sub_index(s);
  const Matrix& u = resonant_photon == 1 ? u_map_1_[i] : u_map_0_[i];
  const Matrix& v = resonant_photon == 1 ? u_map_0_[i] : u_map_1_[i];
  const double pus = p_us_[i];
  const double pmf = p_mf_[i];
  const double a_ideal = (1.0 - pus) * (1.0 - pmf);
  const double a_us = pus * (1.0 - pmf);
  const double a_mf = (1.0 - pus) * pmf;   // resonant rotation fails
  const double a_both = pus * pmf;         // only the detuned block flips

  for (auto& b : set.branches) {
    if (!b.live()) continue;
    Matrix next = a_ideal * (u * b.rho * u.adjoint());
    next += a_us * (x_t_[i] * b.rho * x_t_[i].adjoint());
    next += a_mf * b.rho;
    next += a_both * (v * b.rho * v.adjoint());
    b.rho = next;
  }
}

void ProtocolEngine::mapping_step(BranchSet& set, int resonant_b,
                                  int resonant_a) const {
  const double half = map_wall_us() / 2.0;
  apply_window(set, ambient(), half);
  apply_map_arms(set, Subsystem::Bob, resonant_b);
  apply_map_arms(set, Subsystem::Alice, resonant_a);
  apply_window(set, ambient(), half);
  set.prune(prune_tol_);
}

void ProtocolEngine::povm_split(BranchSet& set, Subsystem s,
                                const std::string& label,
                                bool flip_record) const {
  const int i = sub_index(s);
  std::vector<Branch> out;
  out.reserve(set.branches.size() * 2);
  for (auto& b : set.branches) {
    if (!b.live()) {
      out.push_back(std::move(b));
      continue;
    }
    const Matrix rho_g = povm_g_[i] * b.rho * povm_g_[i].adjoint();
    const Matrix rho_e = povm_e_[i] * b.rho * povm_e_[i].adjoint();
    const double pg = std::max(0.0, rho_g.trace().real());
    const double pe = std::max(0.0, rho_e.trace().real());
    const std::array<std::pair<double, const Matrix*>, 2> outcomes = {
        std::make_pair(pg, &rho_g), std::make_pair(pe, &rho_e)};
    const std::array<char, 2> labels = {flip_record ? 'E' : 'G',
                                        flip_record ? 'G' : 'E'};
    for (int k = 0; k < 2; ++k) {
      const double mass = b.weight * outcomes[k].first;
      if (mass <= 0.0) continue;
      Branch child;
      child.weight = mass;
      child.rho = *outcomes[k].second / outcomes[k].first;
      child.records = b.records;
      child.records.push_back({label, s, labels[k]});
      out.push_back(std::move(child));
    }
  }
  set.branches = std::move(out);
}

void ProtocolEngine::readout_step(BranchSet& set,
                                  const std::string& label) const {
  std::array<bool, 2> flip = {false, false};
  if (fault_ && fault_->kind == FaultPlan::Kind::ClassificationFlip &&
      readout_counter_ == fault_->slot)
    flip[sub_index(fault_->subsystem)] = true;
  ++readout_counter_;

  const double wall = readout_wall_us();
  std::array<double, 2> start, mid;
  for (Subsystem s : kSubOrder) {
    const int i = sub_index(s);
    const double t_m = hp_.sub(s).t_m_us;
    start[i] = wall - t_m;
    mid[i] = start[i] + t_m / 2.0;
  }

  std::vector<double> bounds = {0.0,      start[0], start[1],
                                mid[0],   mid[1],   wall};
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < kTimeEps;
                           }),
               bounds.end());

  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double a = bounds[k];
    const double b = bounds[k + 1];
    WindowEnv env = ambient();
    for (Subsystem s : kSubOrder) {
      const int i = sub_index(s);
      if (a >= start[i] - kTimeEps) {
        const int tr = mode_index(transmon_of(s));
        env.t1[tr] = hp_.sub(s).t1_ro_us;
        env.nth[tr] = hp_.sub(s).nth_ro;
      }
    }
    apply_window(set, env, b - a);
    for (Subsystem s : kSubOrder) {
      const int i = sub_index(s);
      if (std::abs(mid[i] - b) < kTimeEps)
        povm_split(set, s, label, flip[i]);
    }
  }

  apply_window(set, ambient(), dead_time_us());
  set.prune(prune_tol_);
}

void ProtocolEngine::reset_step(BranchSet& set,
                                const std::string& read_label) const {
  const double half = reset_wall_us() / 2.0;
  apply_window(set, ambient(), half);
  for (auto& b : set.branches) {
    if (!b.live()) continue;
    for (Subsystem s : kSubOrder) {
      const int i = sub_index(s);
      const OutcomeRecord* found = nullptr;
      for (auto it = b.records.rbegin(); it != b.records.rend(); ++it) {
        if (it->step == read_label && it->subsystem == s) {
          found = &*it;
          break;
        }
      }
      if (!found)
        throw std::logic_error("reset references missing readout " +
                               read_label);
      if (found->outcome != 'E') continue;
      // failure mode of the unselective pulse: it acts selectively and only
      // rotates the component resonant at one photon
      Matrix next = (1.0 - p_s_[i]) * (x_t_[i] * b.rho * x_t_[i].adjoint());
      next += p_s_[i] * (u_map_1_[i] * b.rho * u_map_1_[i].adjoint());
      b.rho = next;
    }
  }
  apply_window(set, ambient(), half);
  set.prune(prune_tol_);
}

void ProtocolEngine::seal_on_mismatch(BranchSet& set, const std::string& label,
                                      char expected, Seal seal) const {
  for (auto& b : set.branches) {
    if (!b.live()) continue;
    for (const auto& r : b.records) {
      if (r.step == label && r.outcome != expected) {
        b.seal = seal;
        break;
      }
    }
  }
}

BranchSet ProtocolEngine::prepare_logical(int photon_b, int photon_a,
                                          PrepMethod method) const {
  if ((photon_b != 0 && photon_b != 1) || (photon_a != 0 && photon_a != 1))
    throw std::invalid_argument("photon targets must be 0 or 1");

  Matrix rho(1, 1);
  rho(0, 0) = 1.0;
  const std::array<int, 2> targets = {photon_b, photon_a};
  for (Subsystem s : kSubOrder) {
    const SubsystemParams& sp = hp_.sub(s);
    Matrix cav = Matrix::Zero(2, 2);
    if (targets[sub_index(s)] == 1) {
      // measured loading infidelity, already inclusive of the pulse window
      cav(0, 0) = sp.eps_ocp;
      cav(1, 1) = 1.0 - sp.eps_ocp;
    } else {
      const double eps_reset =
          budget::prep_error_estimates(hp_, s).eps_reset;
      cav(0, 0) = 1.0 - eps_reset;
      cav(1, 1) = eps_reset;
      // the empty rail idles for the duration of the loading pulse
      cav = apply_kraus(gad_kraus(hp_.tau_ocp_us, sp.t1c_us, sp.nth_c), cav);
    }
    Matrix tr = Matrix::Zero(2, 2);
    tr(0, 0) = 1.0;
    tr = apply_kraus(gad_kraus(hp_.tau_ocp_us, sp.t1t_us, sp.nth_t), tr);
    rho = kron(kron(rho, cav), tr);
  }

  BranchSet set;
  Branch root;
  root.weight = 1.0;
  root.rho = rho;
  set.branches.push_back(std::move(root));

  readout_step(set, "prep_t");
  seal_on_mismatch(set, "prep_t", 'G', Seal::FPC);

  if (method == PrepMethod::CavityChecks) {
    for (int k = 1; k <= budget::kCavityChecks; ++k) {
      // the check pulse is resonant on the unwanted Fock state, so the
      // expected outcome is G for both targets
      mapping_step(set, 1 - photon_b, 1 - photon_a);
      const std::string label = "prep" + std::to_string(k);
      readout_step(set, label);
      seal_on_mismatch(set, label, 'G', Seal::FPC);
      reset_step(set, label);
    }
  }
  return set;
}

void ProtocolEngine::logical_measurement(BranchSet& set, int rounds) const {
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  readout_step(set, "check0");
  seal_on_mismatch(set, "check0", 'G', Seal::FMC);
  for (int k = 1; k <= rounds; ++k) {
    mapping_step(set);
    const std::string label = "round" + std::to_string(k);
    readout_step(set, label);
    reset_step(set, label);
    if (rounds >= 2) {
      const std::string check = "check" + std::to_string(k);
      readout_step(set, check);
      seal_on_mismatch(set, check, 'G', Seal::FMC);
    }
  }
}

DecodePlan ProtocolEngine::plan(int rounds, PrepMethod method) const {
  DecodePlan p;
  p.rounds = rounds;
  p.prep_expected["prep_t"] = 'G';
  if (method == PrepMethod::CavityChecks)
    for (int k = 1; k <= budget::kCavityChecks; ++k)
      p.prep_expected["prep" + std::to_string(k)] = 'G';
  return p;
}

void ProtocolEngine::arm_fault(const FaultPlan& fault) const {
  fault_ = fault;
  reset_fault_counters();
}

void ProtocolEngine::disarm_fault() const { fault_ = std::nullopt; }

void ProtocolEngine::reset_fault_counters() const {
  window_counter_ = 0;
  readout_counter_ = 0;
}

void ProtocolEngine::maybe_fire_jump_fault(BranchSet& set) const {
  if (!fault_ || fault_->kind == FaultPlan::Kind::ClassificationFlip) return;
  if (window_counter_ != fault_->slot) return;

  Mode mode;
  bool lower;
  switch (fault_->kind) {
    case FaultPlan::Kind::CavityDecay:
      mode = cavity_of(fault_->subsystem);
      lower = true;
      break;
    case FaultPlan::Kind::CavityHeat:
      mode = cavity_of(fault_->subsystem);
      lower = false;
      break;
    case FaultPlan::Kind::TransmonDecay:
      mode = transmon_of(fault_->subsystem);
      lower = true;
      break;
    default:
      mode = transmon_of(fault_->subsystem);
      lower = false;
      break;
  }
  Matrix a = space_.mode_operator(mode, ModeOp::Annihilation);
  const Matrix jump = space_.embed(mode, lower ? a : Matrix(a.adjoint()));

  // conditions the ensemble on the jump having happened here; branches with
  // no support for it lose their weight
  for (auto& b : set.branches) {
    if (!b.live()) continue;
    Matrix next = jump * b.rho * jump.adjoint();
    const double tr = next.trace().real();
    b.weight *= std::max(0.0, tr);
    if (tr > 0.0) b.rho = next / tr;
  }
  set.prune(prune_tol_);
}

// --- experiment drivers ---

double LeafDistribution::total_weight() const {
  double w = pruned_mass;
  for (const auto& l : leaves) w += l.weight;
  return w;
}

Metrics LeafDistribution::tally() const {
  Metrics m;
  for (const auto& l : leaves) m.add(decode_shot(l.records, plan).cls, l.weight);
  return m;
}

LeafDistribution distill(const BranchSet& set, const DecodePlan& plan) {
  LeafDistribution dist;
  dist.plan = plan;
  dist.pruned_mass = set.pruned_mass;
  dist.leaves.reserve(set.branches.size());
  for (const auto& b : set.branches)
    dist.leaves.push_back({b.weight, b.records});
  return dist;
}

namespace {

std::vector<double> cumulative_weights(const LeafDistribution& dist) {
  std::vector<double> cum;
  cum.reserve(dist.leaves.size());
  double acc = 0.0;
  for (const auto& l : dist.leaves) {
    acc += l.weight;
    cum.push_back(acc);
  }
  if (cum.empty() || cum.back() <= 0.0)
    throw std::invalid_argument("empty leaf distribution");
  return cum;
}

std::size_t draw_leaf(const std::vector<double>& cum, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, cum.back());
  const double u = uni(rng);
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
}

}  // namespace

Metrics sample_counts(const LeafDistribution& dist, std::uint64_t shots,
                      std::uint64_t seed) {
  const auto cum = cumulative_weights(dist);
  std::vector<DecodedClass> classes;
  classes.reserve(dist.leaves.size());
  for (const auto& l : dist.leaves)
    classes.push_back(decode_shot(l.records, dist.plan).cls);

  std::mt19937_64 rng(seed);
  Metrics m;
  for (std::uint64_t i = 0; i < shots; ++i)
    m.add(classes[draw_leaf(cum, rng)], 1.0);
  return m;
}

std::vector<std::vector<OutcomeRecord>> sample_records(
    const LeafDistribution& dist, std::uint64_t shots, std::uint64_t seed) {
  const auto cum = cumulative_weights(dist);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<OutcomeRecord>> out;
  out.reserve(shots);
  for (std::uint64_t i = 0; i < shots; ++i)
    out.push_back(dist.leaves[draw_leaf(cum, rng)].records);
  return out;
}

LeafDistribution run_spam(const ProtocolEngine& eng, int photon_b,
                          int photon_a, int rounds, PrepMethod method) {
  BranchSet set = eng.prepare_logical(photon_b, photon_a, method);
  eng.logical_measurement(set, rounds);
  return distill(set, eng.plan(rounds, method));
}

std::vector<DelayScanPoint> run_delay_scan(
    const ProtocolEngine& eng, int photon_b, int photon_a,
    const std::vector<double>& delays_us, PrepMethod method, int rounds) {
  const BranchSet prepared = eng.prepare_logical(photon_b, photon_a, method);
  const DecodePlan plan = eng.plan(rounds, method);
  std::vector<DelayScanPoint> points;
  points.reserve(delays_us.size());
  for (double delay : delays_us) {
    BranchSet set = prepared;
    eng.idle(set, delay);
    eng.logical_measurement(set, rounds);
    const LeafDistribution dist = distill(set, plan);
    points.push_back({delay, dist.tally(), dist.pruned_mass});
  }
  return points;
}

}  // namespace dualrail
