#pragma once

// Jacobi-preconditioned conjugate gradients for the symmetric positive
// definite systems (I - c L_kappa) x = b that implicit diffusion needs.

#include <vector>

#include "tvlab/dynamics.hpp"

namespace tvlab {

struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (I - c * div(kappa grad .)) x = b with c >= 0. `x` holds the
/// initial guess on entry. Converges to relative residual `tol`; throws
/// StepFailure after `max_iter` iterations (default 10 * cells) or on
/// non-finite data. Afterwards the mean of x is corrected so that
/// sum(x) == sum(b), which the exact operator guarantees (the diffusion
/// part integrates to zero).
CgStats solve_implicit_diffusion(const FaceCoefficients& faces, double c,
                                 const std::vector<double>& b, std::vector<double>& x,
                                 double tol = 1e-10, int max_iter = -1);

}  // namespace tvlab
