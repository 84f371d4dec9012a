#pragma once

// Right-hand side of the first-order (v, u, theta) system with
// v = u_t + a u:
//
//   v_t     = div(gamma(theta) grad v) + a v - a^2 u + div f(theta)
//   u_t     = v - a u
//   theta_t = D lap theta + Gamma(theta) |grad v - a grad u|^2
//             + F(theta) . (grad v - a grad u)
//
// with homogeneous Neumann conditions on v, u and theta.

#include <vector>

#include "tvlab/coefficients.hpp"
#include "tvlab/grid.hpp"

namespace tvlab {

struct SimState {
  ScalarField v;
  ScalarField u;
  ScalarField theta;
  double t = 0.0;

  explicit SimState(const Grid& g) : v(g), u(g), theta(g) {}
  SimState(ScalarField v_, ScalarField u_, ScalarField theta_, double t_ = 0.0);

  const Grid& grid() const { return v.grid; }
  /// Shared grid, finite entries, theta >= -1e-10.
  void validate() const;
};

/// v = u_t + a u.
ScalarField substitute(const ScalarField& u, const ScalarField& u_t, double a);
/// u_t = v - a u.
ScalarField recover_ut(const ScalarField& v, const ScalarField& u, double a);

/// Face-centred diffusivities; boundary faces hold zero (no-flux).
/// x-faces are stored row-major as (nx + 1) per row, y-faces as
/// (ny + 1) per column.
struct FaceCoefficients {
  Grid grid;
  std::vector<double> x_faces;
  std::vector<double> y_faces;

  /// Constant diffusivity on every interior face.
  static FaceCoefficients uniform(const Grid& g, double value);
  /// Arithmetic mean of the adjacent cell values of `cell_values`.
  static FaceCoefficients from_cells(const Grid& g, const std::vector<double>& cell_values);
};

/// Conservative div(kappa grad phi) with the given face diffusivities.
void apply_diffusion(const FaceCoefficients& faces, const std::vector<double>& phi,
                     std::vector<double>& out);

/// gamma(max(theta, 0)) averaged onto faces.
FaceCoefficients gamma_faces(const ScalarField& theta, const CoefficientSpec& spec);

/// The vector field f(max(theta, 0)) at cell centres.
VectorField thermal_stress(const ScalarField& theta, const CoefficientSpec& spec);

/// Gamma(theta) |grad v - a grad u|^2 + F(theta) . (grad v - a grad u).
ScalarField heat_source(const SimState& state, const CoefficientSpec& spec,
                        const ModelParams& params);

/// a v - a^2 u + div f(theta).
ScalarField momentum_source(const SimState& state, const CoefficientSpec& spec,
                            const ModelParams& params);

/// Integral of v - a u.
double mass(const SimState& state, double a);
/// Net outward boundary flux of f(theta), the rate of change of mass().
double mass_flux(const SimState& state, const CoefficientSpec& spec);

struct RhsSplit {
  ScalarField dv_stiff;         // div(gamma grad v)
  ScalarField dtheta_stiff;     // D lap theta
  ScalarField dv_nonstiff;      // a v - a^2 u + div f(theta)
  ScalarField du;               // v - a u
  ScalarField dtheta_nonstiff;  // heat source
};

struct Rhs {
  ScalarField dv;
  ScalarField du;
  ScalarField dtheta;
  RhsSplit split;
};

Rhs rhs(const SimState& state, const CoefficientSpec& spec, const ModelParams& params);

}  // namespace tvlab
