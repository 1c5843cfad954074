#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualrail/fits.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace dualrail;

TEST_CASE("linear fit reproduces an exact line") {
  std::vector<double> x, y;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(0.5 * i);
    y.push_back(3.25 * (0.5 * i) - 1.75);
  }
  fits::LinearFit f = fits::fit_linear(x, y);
  CHECK(f.slope == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(-1.75).epsilon(1e-12));
  CHECK(f.chi2 < 1e-18);
}

TEST_CASE("linear fit recovers a small slope buried in noise") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 1e-6);
  std::vector<double> x, y, yerr;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(static_cast<double>(i));
    y.push_back(1.5e-5 * i + noise(rng));
    yerr.push_back(1e-6);
  }
  fits::LinearFit f = fits::fit_linear(x, y, yerr);
  CHECK(f.slope_sigma > 0.0);
  CHECK(std::abs(f.slope - 1.5e-5) < 2.0 * f.slope_sigma);
}

TEST_CASE("linear fit of constant data has zero slope") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y(x.size(), 0.7);
  fits::LinearFit f = fits::fit_linear(x, y);
  CHECK(std::abs(f.slope) < 1e-15);
  CHECK(f.intercept == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("doubling the error bars doubles the slope uncertainty") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
  std::vector<double> y = {0.1, 0.35, 0.52, 0.81};
  fits::LinearFit narrow = fits::fit_linear(x, y, {0.05, 0.05, 0.05, 0.05});
  fits::LinearFit wide = fits::fit_linear(x, y, {0.1, 0.1, 0.1, 0.1});
  CHECK(wide.slope == doctest::Approx(narrow.slope).epsilon(1e-12));
  CHECK(wide.slope_sigma == doctest::Approx(2.0 * narrow.slope_sigma).epsilon(1e-12));
  CHECK(wide.chi2 == doctest::Approx(0.25 * narrow.chi2).epsilon(1e-12));
}

TEST_CASE("fits reject malformed input") {
  CHECK_THROWS_AS(fits::fit_linear({1.0, 2.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fits::fit_linear({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fits::fit_sinusoid({1.0, 2.0}, {1.0, 2.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fits::fit_decay({1.0, 2.0}, {1.0, 0.9}),
                  std::invalid_argument);
}

TEST_CASE("sinusoid fit recovers amplitude, phase and offset exactly") {
  const double amp = 0.37, phase0 = 1.1, offset = 0.25;
  std::vector<double> phases, y;
  for (int k = 0; k < 8; ++k) {
    const double phi = k * 3.14159265358979323846 / 4.0;
    phases.push_back(phi);
    y.push_back(amp * std::cos(phi - phase0) + offset);
  }
  fits::SinusoidFit f = fits::fit_sinusoid(phases, y);
  CHECK(f.amplitude == doctest::Approx(amp).epsilon(1e-9));
  CHECK(f.phase == doctest::Approx(phase0).epsilon(1e-9));
  CHECK(f.offset == doctest::Approx(offset).epsilon(1e-9));
}

TEST_CASE("sinusoid fit is insensitive to a sign flip of the amplitude") {
  // -A cos(phi - p0) = A cos(phi - p0 - pi): amplitude stays positive
  std::vector<double> phases, y;
  for (int k = 0; k < 6; ++k) {
    const double phi = k * 1.0;
    phases.push_back(phi);
    y.push_back(-0.5 * std::cos(phi - 0.4) + 0.1);
  }
  fits::SinusoidFit f = fits::fit_sinusoid(phases, y);
  CHECK(f.amplitude == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("decay fit recovers base, amplitude and offset") {
  const double p_true = 0.9713, a_true = 0.45, b_true = 0.5;
  std::vector<double> m, y;
  for (int d = 0; d <= 50; d += 5) {
    m.push_back(static_cast<double>(d));
    y.push_back(a_true * std::pow(p_true, d) + b_true);
  }
  fits::DecayFit f = fits::fit_decay(m, y);
  CHECK(f.p == doctest::Approx(p_true).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(a_true).epsilon(1e-4));
  CHECK(f.offset == doctest::Approx(b_true).epsilon(1e-4));
  CHECK(f.rms_residual < 1e-8);
}

TEST_CASE("decay fit resolves bases close to one") {
  // per-step decay 7.4e-4: far finer than the coarse uniform grid
  const double p_true = 0.99926;
  std::vector<double> m = {1.0, 300.0, 900.0, 1800.0, 2400.0};
  std::vector<double> y;
  for (double d : m) y.push_back(1.03 * std::pow(p_true, d));
  fits::DecayFit f = fits::fit_decay(m, y);
  CHECK(f.p == doctest::Approx(p_true).epsilon(1e-5));
  CHECK(f.amplitude == doctest::Approx(1.03).epsilon(1e-3));
  CHECK(std::abs(f.offset) < 1e-3);
}

TEST_CASE("decay fit never runs off to the degenerate linear branch") {
  // Survival points that scatter concave in depth admit no true decay shape;
  // the unconstrained least squares would chase p -> 1 with a huge
  // amplitude/offset pair canceling to a straight line. The fit must stay at
  // a physical amplitude and a base visibly below one.
  std::vector<double> m = {1.0, 200.0, 600.0, 1200.0};
  std::vector<double> y = {0.9984, 0.9251, 0.7415, 0.3257};
  fits::DecayFit f = fits::fit_decay(m, y);
  CHECK(std::abs(f.amplitude) <= 5.0 + 1e-9);
  CHECK(std::abs(f.offset) <= 5.0 + 1e-9);
  CHECK(f.p < 0.99999);
  CHECK(f.p > 0.9);
}

TEST_CASE("decay fit throws on flat data") {
  std::vector<double> m = {1.0, 10.0, 20.0, 40.0};
  std::vector<double> y(m.size(), 0.5);
  CHECK_THROWS_AS(fits::fit_decay(m, y), std::runtime_error);
}
