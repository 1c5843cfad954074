#include "dualrail/rocalib.hpp"

#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace dualrail {
namespace {

// classical two-level relaxation step matching the GAD channel convention:
// flip probabilities p(e->g) = p_down (1 - nth), p(g->e) = p_down nth with
// p_down = 1 - e^{-t/T1}
struct RelaxStep {
  double up = 0.0;
  double down = 0.0;
};

RelaxStep relax_step(double t_us, double t1_us, double nth) {
  const double p_down = 1.0 - std::exp(-t_us / t1_us);
  return {p_down * nth, p_down * (1.0 - nth)};
}

int step_state(int s, const RelaxStep& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (s == 1) return (u(rng) < r.down) ? 0 : 1;
  return (u(rng) < r.up) ? 1 : 0;
}

// 2x2 transition matrix of one relaxation step, m[to][from]
using TransMatrix = std::array<std::array<double, 2>, 2>;

TransMatrix matrix_of(const RelaxStep& r) {
  return {{{1.0 - r.up, r.down}, {r.up, 1.0 - r.down}}};
}

TransMatrix multiply(const TransMatrix& a, const TransMatrix& b) {
  TransMatrix c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double outcome_prob(int state, int outcome, double p_ge, double p_eg) {
  if (state == 0) return (outcome == 1) ? p_ge : 1.0 - p_ge;
  return (outcome == 0) ? p_eg : 1.0 - p_eg;
}

}  // namespace

RoCalibResult run_ro_calib(const HardwareParams& hp,
                           const RoCalibConfig& cfg) {
  const SubsystemParams& sp = hp.sub(cfg.subsystem);
  const RelaxStep half = relax_step(sp.t_m_us / 2.0, sp.t1_ro_us, sp.nth_ro);
  const RelaxStep dead = relax_step(sp.t_d_us, sp.t1t_us, sp.nth_t);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  const int n = cfg.measurements_per_record;
  std::vector<int> rec(static_cast<std::size_t>(n));

  std::int64_t n_gg = 0, flips_gg = 0;  // G-neighbor windows, E in middle
  std::int64_t n_ee = 0, flips_ee = 0;
  std::int64_t n_triples = 0, persist_changes = 0;

  for (int r = 0; r < cfg.records; ++r) {
    int s = 0;  // prepared in |g>
    for (int i = 0; i < n; ++i) {
      s = step_state(s, half, rng);
      const double pe = (s == 0) ? sp.p_ge : 1.0 - sp.p_eg;
      rec[static_cast<std::size_t>(i)] = (u(rng) < pe) ? 1 : 0;
      s = step_state(s, half, rng);
      s = step_state(s, dead, rng);
    }

    for (int i = 1; i + 1 < n; ++i) {
      const int a = rec[static_cast<std::size_t>(i - 1)];
      const int b = rec[static_cast<std::size_t>(i)];
      const int c = rec[static_cast<std::size_t>(i + 1)];
      if (a == 0 && c == 0) {
        ++n_gg;
        if (b == 1) ++flips_gg;
      } else if (a == 1 && c == 1) {
        ++n_ee;
        if (b == 0) ++flips_ee;
      }
    }
    for (int i = 0; i + 2 < n; ++i) {
      ++n_triples;
      const int a = rec[static_cast<std::size_t>(i)];
      const int b = rec[static_cast<std::size_t>(i + 1)];
      if (a != b && rec[static_cast<std::size_t>(i + 2)] == b)
        ++persist_changes;
    }
  }

  RoCalibResult res;
  res.n_g_windows = n_gg;
  res.n_e_windows = n_ee;
  if (n_gg > 0) {
    res.p_ge_hat = static_cast<double>(flips_gg) / n_gg;
    res.p_ge_sigma =
        std::sqrt(std::max(res.p_ge_hat * (1.0 - res.p_ge_hat), 1e-12) /
                  static_cast<double>(n_gg));
  }
  if (n_ee > 0) {
    res.p_eg_hat = static_cast<double>(flips_ee) / n_ee;
    res.p_eg_sigma =
        std::sqrt(std::max(res.p_eg_hat * (1.0 - res.p_eg_hat), 1e-12) /
                  static_cast<double>(n_ee));
  }
  if (n_triples > 0)
    res.measured_transition_rate =
        static_cast<double>(persist_changes) / n_triples;

  // Predicted persistent-change probability per outcome triple, from an
  // exact enumeration of the hidden-state paths of the same slot model,
  // averaged over the triple positions a record contains. before: start of
  // slot to the projection point; after: projection point to end of slot.
  const TransMatrix before = matrix_of(half);
  const TransMatrix after = multiply(matrix_of(dead), matrix_of(half));
  const TransMatrix slot = multiply(after, before);

  const auto triple_prob = [&](const double pre[2]) {
    double p_pattern = 0.0;  // P(o1 != o0 and o2 == o1)
    for (int o0 = 0; o0 < 2; ++o0) {
      const int o1 = 1 - o0;
      const int o2 = o1;
      for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2) {
            double w = 0.0;
            for (int f = 0; f < 2; ++f) w += before[s0][f] * pre[f];
            w *= outcome_prob(s0, o0, sp.p_ge, sp.p_eg);
            w *= after[1][s0] * before[s1][1] + after[0][s0] * before[s1][0];
            w *= outcome_prob(s1, o1, sp.p_ge, sp.p_eg);
            w *= after[1][s1] * before[s2][1] + after[0][s1] * before[s2][0];
            w *= outcome_prob(s2, o2, sp.p_ge, sp.p_eg);
            p_pattern += w;
          }
    }
    return p_pattern;
  };

  double pre[2] = {1.0, 0.0};  // record starts in |g>
  double predicted = 0.0;
  int positions = 0;
  for (int i = 0; i + 2 < n; ++i) {
    predicted += triple_prob(pre);
    ++positions;
    const double g = pre[0], e = pre[1];
    pre[0] = slot[0][0] * g + slot[0][1] * e;
    pre[1] = slot[1][0] * g + slot[1][1] * e;
  }
  res.predicted_transition_rate =
      (positions > 0) ? predicted / positions : 0.0;
  res.consistency_ratio = (res.predicted_transition_rate > 0.0)
                              ? res.measured_transition_rate /
                                    res.predicted_transition_rate
                              : 0.0;
  return res;
}

}  // namespace dualrail
