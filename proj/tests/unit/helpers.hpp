#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "tvlab/grid.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline tvlab::ScalarField cos_mode(const tvlab::Grid& g, double amp = 1.0, int k = 1) {
  const double L = g.length(0);
  return tvlab::ScalarField::sample(
      g, [&](double x, double) { return amp * std::cos(k * pi * x / L); });
}

inline tvlab::ScalarField random_field(const tvlab::Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  tvlab::ScalarField f(g);
  for (double& x : f.values) x = U(rng);
  return f;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace testing
