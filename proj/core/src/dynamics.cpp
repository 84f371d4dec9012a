#include "tvlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "tvlab/errors.hpp"

namespace tvlab {

SimState::SimState(ScalarField v_, ScalarField u_, ScalarField theta_, double t_)
    : v(std::move(v_)), u(std::move(u_)), theta(std::move(theta_)), t(t_) {}

void SimState::validate() const {
  require_same_grid(v.grid, u.grid);
  require_same_grid(v.grid, theta.grid);
  v.require_finite();
  u.require_finite();
  theta.require_finite();
  if (!std::isfinite(t) || t < 0.0) throw FieldError("state time must be finite and >= 0");
  if (theta.min() < -1e-10) throw DomainError("temperature negativity beyond tolerance");
}

ScalarField substitute(const ScalarField& u, const ScalarField& u_t, double a) {
  require_same_grid(u.grid, u_t.grid);
  ScalarField v(u.grid);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = u_t[k] + a * u[k];
  return v;
}

ScalarField recover_ut(const ScalarField& v, const ScalarField& u, double a) {
  require_same_grid(v.grid, u.grid);
  ScalarField ut(v.grid);
  for (std::size_t k = 0; k < ut.size(); ++k) ut[k] = v[k] - a * u[k];
  return ut;
}

FaceCoefficients FaceCoefficients::uniform(const Grid& g, double value) {
  std::vector<double> cells(g.size(), value);
  return from_cells(g, cells);
}

FaceCoefficients FaceCoefficients::from_cells(const Grid& g, const std::vector<double>& c) {
  FaceCoefficients out{g, {}, {}};
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  out.x_faces.assign(static_cast<std::size_t>(nx + 1) * ny, 0.0);
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = g.index(0, j);
    double* f = &out.x_faces[static_cast<std::size_t>(j) * (nx + 1)];
    for (int i = 1; i < nx; ++i) f[i] = 0.5 * (c[row + i - 1] + c[row + i]);
  }
  if (g.dim() == 2) {
    out.y_faces.assign(static_cast<std::size_t>(ny + 1) * nx, 0.0);
    for (int i = 0; i < nx; ++i) {
      double* f = &out.y_faces[static_cast<std::size_t>(i) * (ny + 1)];
      for (int j = 1; j < ny; ++j) f[j] = 0.5 * (c[g.index(i, j - 1)] + c[g.index(i, j)]);
    }
  }
  return out;
}

void apply_diffusion(const FaceCoefficients& faces, const std::vector<double>& phi,
                     std::vector<double>& out) {
  const Grid& g = faces.grid;
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  out.resize(g.size());
  const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = g.index(0, j);
    const double* f = &faces.x_faces[static_cast<std::size_t>(j) * (nx + 1)];
    const double* p = &phi[row];
    double* o = &out[row];
    o[0] = f[1] * (p[1] - p[0]) * ihx2;
    for (int i = 1; i < nx - 1; ++i) {
      o[i] = (f[i + 1] * (p[i + 1] - p[i]) - f[i] * (p[i] - p[i - 1])) * ihx2;
    }
    o[nx - 1] = -f[nx - 1] * (p[nx - 1] - p[nx - 2]) * ihx2;
  }
  if (g.dim() == 2) {
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int i = 0; i < nx; ++i) {
      const double* f = &faces.y_faces[static_cast<std::size_t>(i) * (ny + 1)];
      for (int j = 0; j < ny; ++j) {
        const std::size_t k = g.index(i, j);
        double flux_up = 0.0;
        double flux_down = 0.0;
        if (j < ny - 1) flux_up = f[j + 1] * (phi[g.index(i, j + 1)] - phi[k]);
        if (j > 0) flux_down = f[j] * (phi[k] - phi[g.index(i, j - 1)]);
        out[k] += (flux_up - flux_down) * ihy2;
      }
    }
  }
}

FaceCoefficients gamma_faces(const ScalarField& theta, const CoefficientSpec& spec) {
  std::vector<double> cells(theta.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    cells[k] = spec.gamma()(std::max(theta[k], 0.0));
  }
  return FaceCoefficients::from_cells(theta.grid, cells);
}

VectorField thermal_stress(const ScalarField& theta, const CoefficientSpec& spec) {
  VectorField out(theta.grid);
  const int comps = std::min(spec.components(), theta.grid.dim());
  for (int c = 0; c < comps; ++c) {
    const Polynomial& fc = spec.f()[c];
    for (std::size_t k = 0; k < theta.size(); ++k) out[c][k] = fc(std::max(theta[k], 0.0));
  }
  return out;
}

ScalarField heat_source(const SimState& state, const CoefficientSpec& spec,
                        const ModelParams& params) {
  const ScalarField w = recover_ut(state.v, state.u, params.a);  // v - a u
  const VectorField g = gradient(w);
  ScalarField out(state.grid());
  const int dim = state.grid().dim();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double th = std::max(state.theta[k], 0.0);
    double s = spec.Gamma_cap()(th) * g.norm2(k);
    for (int c = 0; c < dim && c < static_cast<int>(spec.F().size()); ++c) {
      s += spec.F()[c](th) * g[c][k];
    }
    out[k] = s;
  }
  return out;
}

ScalarField momentum_source(const SimState& state, const CoefficientSpec& spec,
                            const ModelParams& params) {
  ScalarField out = divergence(thermal_stress(state.theta, spec));
  const double a = params.a;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += a * state.v[k] - a * a * state.u[k];
  return out;
}

double mass(const SimState& state, double a) {
  double s = 0.0;
  for (std::size_t k = 0; k < state.v.size(); ++k) s += state.v[k] - a * state.u[k];
  return s * state.grid().cell_volume();
}

double mass_flux(const SimState& state, const CoefficientSpec& spec) {
  return boundary_flux(thermal_stress(state.theta, spec));
}

Rhs rhs(const SimState& state, const CoefficientSpec& spec, const ModelParams& params) {
  require_same_grid(state.v.grid, state.u.grid);
  require_same_grid(state.v.grid, state.theta.grid);
  state.v.require_finite();
  state.u.require_finite();
  state.theta.require_finite();
  const Grid& g = state.grid();

  RhsSplit split{ScalarField(g), ScalarField(g), momentum_source(state, spec, params),
                 recover_ut(state.v, state.u, params.a), heat_source(state, spec, params)};
  apply_diffusion(gamma_faces(state.theta, spec), state.v.values, split.dv_stiff.values);
  apply_diffusion(FaceCoefficients::uniform(g, params.D), state.theta.values,
                  split.dtheta_stiff.values);

  ScalarField dv(g);
  ScalarField dtheta(g);
  for (std::size_t k = 0; k < dv.size(); ++k) {
    dv[k] = split.dv_stiff[k] + split.dv_nonstiff[k];
    dtheta[k] = split.dtheta_stiff[k] + split.dtheta_nonstiff[k];
  }
  dv.require_finite();
  dtheta.require_finite();
  ScalarField du = split.du;
  return Rhs{std::move(dv), std::move(du), std::move(dtheta), std::move(split)};
}

}  // namespace tvlab
