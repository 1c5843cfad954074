#pragma once

#include <vector>

namespace dualrail {
namespace fits {

struct LinearFit {
  double slope = 0.0;
  double slope_sigma = 0.0;
  double intercept = 0.0;
  double intercept_sigma = 0.0;
  double chi2 = 0.0;
};

// Weighted least squares y = slope*x + intercept. If yerr is empty the fit
// is unweighted and the parameter uncertainties are scaled by the residual
// variance; otherwise weights are 1/yerr^2.
LinearFit fit_linear(const std::vector<double>& x,
                     const std::vector<double>& y,
                     const std::vector<double>& yerr = {});

struct SinusoidFit {
  double a = 0.0;  // cos coefficient
  double b = 0.0;  // sin coefficient
  double offset = 0.0;
  double amplitude = 0.0;  // hypot(a, b)
  double phase = 0.0;      // y = amplitude*cos(phi - phase) + offset
};

// Least-squares fit of y(phi) = a cos(phi) + b sin(phi) + c on known phases;
// linear in the parameters, so no initial guess is needed.
SinusoidFit fit_sinusoid(const std::vector<double>& phases,
                         const std::vector<double>& y);

struct DecayFit {
  double amplitude = 0.0;  // A
  double offset = 0.0;     // B
  double p = 0.0;          // decay base per step
  double rms_residual = 0.0;
};

// Fit y(m) = A*p^m + B by scanning p on a grid (uniform, densified toward
// p = 1 where slow decays live) and solving the linear subproblem for (A, B)
// at each candidate, then refining the best p with a golden-section search.
// Candidates whose (A, B) leave the scale of the data are rejected so the
// near-degenerate p -> 1 limit cannot masquerade as a slow decay. Throws
// std::runtime_error on flat data where p is unidentifiable.
DecayFit fit_decay(const std::vector<double>& depths,
                   const std::vector<double>& survival);

}  // namespace fits
}  // namespace dualrail
