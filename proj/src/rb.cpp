#include "dualrail/rb.hpp"

#include "dualrail/channels.hpp"
#include "dualrail/gates.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>

namespace dualrail {
namespace {

using Eigen::Matrix2cd;

// Phase-invariant fingerprint: rotate the global phase so the first
// clearly-nonzero entry is real positive, then round to a coarse grid.
// Clifford entry magnitudes are 0, 1/2, 1/sqrt(2) or 1, so the reference
// entry is stable against rounding noise (unlike an argmax, which can land
// on either of two tied magnitudes).
std::array<int, 8> fingerprint(const Matrix2cd& u) {
  int bi = 0, bj = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(u(i, j)) > 0.3) {
        bi = i;
        bj = j;
        i = 2;
        break;
      }
  const complexd phase = u(bi, bj) / std::abs(u(bi, bj));
  std::array<int, 8> key{};
  int k = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const complexd v = u(i, j) / phase;
      key[k++] = static_cast<int>(std::lround(v.real() * 1e6));
      key[k++] = static_cast<int>(std::lround(v.imag() * 1e6));
    }
  return key;
}

// logical Pauli on the cavity pair extended by the identity on the leakage
// states |00>, |11> and on both transmons; kind 0 = X, 1 = Y, 2 = Z
Matrix extended_pauli(const SpaceLayout& space, int kind) {
  Matrix op = Matrix::Zero(space.dim(), space.dim());
  for (int idx = 0; idx < space.dim(); ++idx) {
    std::vector<int> occ = space.occupations(idx);
    const int cb = occ[mode_index(Mode::CavityB)];
    const int ca = occ[mode_index(Mode::CavityA)];
    if (cb == ca) {  // leakage sector: identity
      op(idx, idx) = 1.0;
      continue;
    }
    const bool is_one_l = (cb == 1 && ca == 0);  // |1_L> = |10>
    if (kind == 2) {
      op(idx, idx) = is_one_l ? 1.0 : -1.0;
      continue;
    }
    std::vector<int> swapped = occ;
    std::swap(swapped[mode_index(Mode::CavityB)],
              swapped[mode_index(Mode::CavityA)]);
    const int target = space.index(swapped);
    if (kind == 0)
      op(target, idx) = 1.0;
    else  // Y: |0_L> -> i|1_L>, |1_L> -> -i|0_L>
      op(target, idx) = is_one_l ? complexd(0.0, -1.0) : complexd(0.0, 1.0);
  }
  return op;
}

KrausSet depolarizing_kraus(const SpaceLayout& space, double lambda) {
  KrausSet k;
  k.ops.push_back(std::sqrt(1.0 - 0.75 * lambda) * space.identity());
  for (int kind = 0; kind < 3; ++kind)
    k.ops.push_back(std::sqrt(0.25 * lambda) * extended_pauli(space, kind));
  return k;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) +
                    0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Eigen::Matrix2cd generator_matrix(const RbGenerator& g) {
  Matrix2cd sx, sy;
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, complexd(0.0, -1.0), complexd(0.0, 1.0), 0.0;
  const Matrix2cd axis = std::cos(g.phi) * sx + std::sin(g.phi) * sy;
  return std::cos(g.theta / 2.0) * Matrix2cd::Identity() -
         complexd(0.0, 1.0) * std::sin(g.theta / 2.0) * axis;
}

const CliffordTable& clifford_table() {
  static const CliffordTable table = [] {
    CliffordTable t;
    std::map<std::array<int, 8>, int> seen;

    CliffordTable::Element id;
    id.u = Matrix2cd::Identity();
    t.elements.push_back(id);
    seen[fingerprint(id.u)] = 0;

    // breadth-first closure; elements are discovered with shortest words
    for (std::size_t head = 0; head < t.elements.size(); ++head) {
      const CliffordTable::Element cur = t.elements[head];
      for (int g = 0; g < static_cast<int>(kRbGenerators.size()); ++g) {
        CliffordTable::Element next;
        next.u = generator_matrix(kRbGenerators[g]) * cur.u;
        next.word = cur.word;
        next.word.push_back(g);
        const auto key = fingerprint(next.u);
        if (seen.emplace(key, t.elements.size()).second)
          t.elements.push_back(std::move(next));
      }
    }
    if (t.elements.size() != 24)
      throw std::logic_error("clifford closure did not yield 24 elements");
    return t;
  }();
  return table;
}

int CliffordTable::inverse_index(const Eigen::Matrix2cd& net) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (std::abs((elements[i].u * net).trace()) > 2.0 - 1e-6)
      return static_cast<int>(i);
  }
  throw std::logic_error("no Clifford inverse found");
}

RbPoint run_rb_sequence(const ProtocolEngine& eng, int depth,
                        std::uint64_t sequence_seed, const RbConfig& cfg) {
  const CliffordTable& table = clifford_table();
  const SpaceLayout& space = eng.space();

  std::mt19937_64 rng(sequence_seed);
  std::uniform_int_distribution<int> pick(0,
      static_cast<int>(table.elements.size()) - 1);

  std::vector<int> sequence(static_cast<std::size_t>(depth));
  Matrix2cd net = Matrix2cd::Identity();
  for (int& c : sequence) {
    c = pick(rng);
    net = table.elements[static_cast<std::size_t>(c)].u * net;
  }
  sequence.push_back(table.inverse_index(net));

  const KrausSet depol =
      depolarizing_kraus(space, 2.0 * cfg.depolarizing_r);

  BranchSet set = eng.prepare_logical(0, 1, PrepMethod::CheckOnly);
  for (int c : sequence) {
    for (int g : table.elements[static_cast<std::size_t>(c)].word) {
      const RbGenerator& gen = kRbGenerators[static_cast<std::size_t>(g)];
      eng.apply_gate(set,
                     beamsplitter_unitary(space, gen.theta, gen.phi));
      if (cfg.noise == RbNoise::Ambient)
        eng.idle(set, cfg.gate_time_us);
    }
    if (cfg.noise == RbNoise::InjectedDepolarizing &&
        cfg.depolarizing_r > 0.0) {
      for (Branch& b : set.branches)
        if (b.live()) b.rho = apply_kraus(depol, b.rho);
    }
  }

  eng.logical_measurement(set, 1);
  const LeafDistribution dist =
      distill(set, eng.plan(1, PrepMethod::CheckOnly));
  const Metrics m = dist.tally();

  RbPoint pt;
  pt.depth = depth;
  const double logical = m.n_01 + m.n_10;
  pt.survival = (logical > 0.0) ? m.n_01 / logical : 0.0;
  pt.erasure_fraction = m.erasure_fraction();
  return pt;
}

RbResult run_rb(const ProtocolEngine& eng, const RbConfig& cfg) {
  RbResult res;
  std::vector<double> depths, survivals;
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    RbPoint avg;
    avg.depth = cfg.depths[di];
    for (int s = 0; s < cfg.sequences_per_depth; ++s) {
      const RbPoint pt = run_rb_sequence(
          eng, cfg.depths[di],
          mix_seed(cfg.seed, di, static_cast<std::uint64_t>(s)), cfg);
      avg.survival += pt.survival;
      avg.erasure_fraction += pt.erasure_fraction;
    }
    avg.survival /= cfg.sequences_per_depth;
    avg.erasure_fraction /= cfg.sequences_per_depth;
    res.points.push_back(avg);
    depths.push_back(static_cast<double>(avg.depth));
    survivals.push_back(avg.survival);
  }

  double smin = survivals[0], smax = survivals[0];
  for (double v : survivals) {
    smin = std::min(smin, v);
    smax = std::max(smax, v);
  }
  if (smax - smin < 1e-9) {  // noiseless: no decay to fit
    res.fit.p = 1.0;
    res.fit.amplitude = 0.0;
    res.fit.offset = survivals[0];
    res.epc = 0.0;
    return res;
  }

  res.fit = fits::fit_decay(depths, survivals);
  res.epc = (1.0 - res.fit.p) / 2.0;
  return res;
}

}  // namespace dualrail
