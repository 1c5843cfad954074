#include "dualrail/fits.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dualrail {
namespace fits {
namespace {

void check_sizes(std::size_t nx, std::size_t ny, std::size_t min_points) {
  if (nx != ny) throw std::invalid_argument("fit: x/y size mismatch");
  if (nx < min_points) throw std::invalid_argument("fit: too few points");
}

// sum of squared residuals of y = A p^m + B at fixed p, with (A, B) solved
// by linear least squares; A and B are written back
double decay_sse(const std::vector<double>& m, const std::vector<double>& y,
                 double p, double* a_out, double* b_out) {
  const std::size_t n = m.size();
  double s_gg = 0.0, s_g = 0.0, s_gy = 0.0, s_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = std::pow(p, m[i]);
    s_gg += g * g;
    s_g += g;
    s_gy += g * y[i];
    s_y += y[i];
  }
  const double det = s_gg * n - s_g * s_g;
  double a, b;
  if (std::abs(det) < 1e-14) {  // all basis values equal; amplitude unusable
    a = 0.0;
    b = s_y / static_cast<double>(n);
  } else {
    a = (s_gy * n - s_g * s_y) / det;
    b = (s_gg * s_y - s_g * s_gy) / det;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (a * std::pow(p, m[i]) + b);
    sse += r * r;
  }
  if (a_out) *a_out = a;
  if (b_out) *b_out = b;
  return sse;
}

}  // namespace

LinearFit fit_linear(const std::vector<double>& x,
                     const std::vector<double>& y,
                     const std::vector<double>& yerr) {
  check_sizes(x.size(), y.size(), 2);
  const bool weighted = !yerr.empty();
  if (weighted && yerr.size() != x.size())
    throw std::invalid_argument("fit_linear: yerr size mismatch");

  double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = 1.0;
    if (weighted) {
      if (yerr[i] <= 0.0)
        throw std::invalid_argument("fit_linear: nonpositive yerr");
      w = 1.0 / (yerr[i] * yerr[i]);
    }
    s += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = s * sxx - sx * sx;
  if (std::abs(det) < 1e-300)
    throw std::runtime_error("fit_linear: degenerate x values");

  LinearFit f;
  f.slope = (s * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    const double w = weighted ? 1.0 / (yerr[i] * yerr[i]) : 1.0;
    f.chi2 += w * r * r;
  }
  double var_scale = 1.0;
  if (!weighted)  // estimate the common variance from the residuals
    var_scale = (x.size() > 2) ? f.chi2 / static_cast<double>(x.size() - 2)
                               : 0.0;
  f.slope_sigma = std::sqrt(var_scale * s / det);
  f.intercept_sigma = std::sqrt(var_scale * sxx / det);
  return f;
}

SinusoidFit fit_sinusoid(const std::vector<double>& phases,
                         const std::vector<double>& y) {
  check_sizes(phases.size(), y.size(), 3);
  const auto n = static_cast<Eigen::Index>(phases.size());
  Eigen::MatrixXd basis(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    basis(i, 0) = std::cos(phases[static_cast<std::size_t>(i)]);
    basis(i, 1) = std::sin(phases[static_cast<std::size_t>(i)]);
    basis(i, 2) = 1.0;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d c =
      basis.colPivHouseholderQr().solve(rhs);

  SinusoidFit f;
  f.a = c(0);
  f.b = c(1);
  f.offset = c(2);
  f.amplitude = std::hypot(f.a, f.b);
  f.phase = std::atan2(f.b, f.a);
  return f;
}

DecayFit fit_decay(const std::vector<double>& depths,
                   const std::vector<double>& survival) {
  check_sizes(depths.size(), survival.size(), 3);

  double ymin = survival[0], ymax = survival[0];
  for (double v : survival) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  if (ymax - ymin < 1e-12)
    throw std::runtime_error("fit_decay: flat survival data");

  // Candidate bases: a uniform coarse grid plus log-spaced points approaching
  // 1, where slow decays (small error per step) live.  As p -> 1 the basis
  // column p^m flattens toward a constant and the unconstrained linear
  // subproblem runs off to huge cancelling (A, B) pairs that shadow any
  // genuine decay with a straight line, so candidates whose solution leaves
  // the scale of the data are rejected.
  const double bound =
      5.0 * std::max(1.0, std::max(std::abs(ymin), std::abs(ymax)));
  std::vector<double> cand;
  constexpr int kGrid = 400;
  cand.reserve(kGrid + 72);
  for (int i = 1; i < kGrid; ++i)
    cand.push_back(static_cast<double>(i) / kGrid);
  for (int k = 1; k <= 72; ++k)
    cand.push_back(1.0 - 2.5e-3 * std::pow(10.0, -k / 12.0));

  const auto bounded_sse = [&](double p) {
    double a = 0.0, b = 0.0;
    const double sse = decay_sse(depths, survival, p, &a, &b);
    if (std::abs(a) > bound || std::abs(b) > bound)
      return std::numeric_limits<double>::infinity();
    return sse;
  };

  int best_i = -1;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const double sse = bounded_sse(cand[i]);
    if (sse < best_sse) {
      best_sse = sse;
      best_i = static_cast<int>(i);
    }
  }
  if (best_i < 0)
    throw std::runtime_error(
        "fit_decay: no decay base fits the data at physical amplitude");

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_i > 0 ? cand[static_cast<std::size_t>(best_i) - 1] : 1e-6;
  double hi = best_i + 1 < static_cast<int>(cand.size())
                  ? cand[static_cast<std::size_t>(best_i) + 1]
                  : 1.0 - 1e-9;
  double c1 = hi - gr * (hi - lo);
  double c2 = lo + gr * (hi - lo);
  double f1 = bounded_sse(c1);
  double f2 = bounded_sse(c2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - gr * (hi - lo);
      f1 = bounded_sse(c1);
    } else {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + gr * (hi - lo);
      f2 = bounded_sse(c2);
    }
  }
  const double p = (lo + hi) / 2.0;

  DecayFit f;
  f.p = p;
  const double sse = decay_sse(depths, survival, p, &f.amplitude, &f.offset);
  f.rms_residual = std::sqrt(sse / static_cast<double>(depths.size()));
  return f;
}

}  // namespace fits
}  // namespace dualrail
