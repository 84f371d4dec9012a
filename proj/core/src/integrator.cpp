#include "tvlab/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "tvlab/errors.hpp"
#include "tvlab/inequality_lab.hpp"
#include "tvlab/linear_solve.hpp"

namespace tvlab {

const char* to_string(Scheme s) { return s == Scheme::imex1 ? "imex1" : "imex2"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "imex1") return Scheme::imex1;
  if (s == "imex2") return Scheme::imex2;
  throw ConfigError("unknown scheme '" + s + "' (expected imex1 or imex2)");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_suspected: return "blowup_suspected";
    case RunStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

void StepControl::validate() const {
  if (!(dt_init > 0.0) || !std::isfinite(dt_init)) throw DomainError("dt_init must be > 0");
  if (!(cfl_fraction > 0.0 && cfl_fraction <= 1.0)) {
    throw DomainError("cfl_fraction must lie in (0, 1]");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be > 0");
  if (max_steps <= 0) throw DomainError("max_steps must be positive");
  if (watchdog.w1p_threshold && !(*watchdog.w1p_threshold > 0.0)) {
    throw DomainError("watchdog thresholds must be > 0");
  }
  if (watchdog.theta_inf_threshold && !(*watchdog.theta_inf_threshold > 0.0)) {
    throw DomainError("watchdog thresholds must be > 0");
  }
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(rows.size());
  for (const auto& r : rows) t.push_back(r.t);
  return t;
}

namespace {

void check_finite(const ScalarField& f) {
  for (double x : f.values) {
    if (!std::isfinite(x)) throw StepFailure("non-finite value during step");
  }
}

struct Parts {
  ScalarField nv;      // a v - a^2 u + div f(theta)
  ScalarField nu;      // v - a u
  ScalarField ntheta;  // heat source
};

Parts nonstiff(const SimState& s, const CoefficientSpec& spec, const ModelParams& params) {
  return Parts{momentum_source(s, spec, params), recover_ut(s.v, s.u, params.a),
               heat_source(s, spec, params)};
}

// Solve (I - c L) x = b, warm-started from `guess`.
ScalarField implicit_solve(const FaceCoefficients& faces, double c, const ScalarField& b,
                           const ScalarField& guess, StepInfo* info) {
  ScalarField x = guess;
  const CgStats st = solve_implicit_diffusion(faces, c, b.values, x.values);
  if (info) info->cg_iterations += st.iterations;
  return x;
}

SimState step_imex1(const SimState& s, double dt, const CoefficientSpec& spec,
                    const ModelParams& params, StepInfo* info) {
  const Grid& g = s.grid();
  const double a = params.a;
  SimState out(g);
  out.t = s.t + dt;

  const ScalarField src_v = momentum_source(s, spec, params);
  ScalarField b(g);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = s.v[k] + dt * src_v[k];
  out.v = implicit_solve(gamma_faces(s.theta, spec), dt, b, s.v, info);

  for (std::size_t k = 0; k < b.size(); ++k) out.u[k] = s.u[k] + dt * (out.v[k] - a * s.u[k]);

  SimState mid(out.v, out.u, s.theta, s.t);
  const ScalarField src_t = heat_source(mid, spec, params);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = s.theta[k] + dt * src_t[k];
  out.theta = implicit_solve(FaceCoefficients::uniform(g, params.D), dt, b, s.theta, info);
  return out;
}

// ARS(2,2,2): explicit tableau c = (0, g, 1), last row (d, 1 - d, 0);
// implicit weights (0, 1 - g, g). Theta is solved before v in each stage
// so that v diffuses with gamma(theta_stage).
SimState step_imex2(const SimState& s, double dt, const CoefficientSpec& spec,
                    const ModelParams& params, StepInfo* info) {
  const Grid& g = s.grid();
  const std::size_t n = g.size();
  const double gc = 1.0 - 1.0 / std::sqrt(2.0);
  const double dl = 1.0 - 1.0 / (2.0 * gc);
  const FaceCoefficients heat = FaceCoefficients::uniform(g, params.D);

  const Parts n1 = nonstiff(s, spec, params);

  // Stage 2.
  SimState s2(g);
  s2.t = s.t + gc * dt;
  ScalarField b(g);
  for (std::size_t k = 0; k < n; ++k) b[k] = s.theta[k] + gc * dt * n1.ntheta[k];
  s2.theta = implicit_solve(heat, gc * dt, b, s.theta, info);
  for (std::size_t k = 0; k < n; ++k) {
    s2.u[k] = s.u[k] + gc * dt * n1.nu[k];
    b[k] = s.v[k] + gc * dt * n1.nv[k];
  }
  const FaceCoefficients gf2 = gamma_faces(s2.theta, spec);
  s2.v = implicit_solve(gf2, gc * dt, b, s.v, info);

  // Stiff stage-2 contributions, recovered from the stage equations.
  ScalarField sv2(g), st2(g);
  for (std::size_t k = 0; k < n; ++k) {
    sv2[k] = (s2.v[k] - s.v[k]) / (gc * dt) - n1.nv[k];
    st2[k] = (s2.theta[k] - s.theta[k]) / (gc * dt) - n1.ntheta[k];
  }
  const Parts n2 = nonstiff(s2, spec, params);

  // Stage 3 = new state.
  SimState out(g);
  out.t = s.t + dt;
  for (std::size_t k = 0; k < n; ++k) {
    b[k] = s.theta[k] + dt * ((1.0 - gc) * st2[k] + dl * n1.ntheta[k] + (1.0 - dl) * n2.ntheta[k]);
  }
  out.theta = implicit_solve(heat, gc * dt, b, s2.theta, info);
  for (std::size_t k = 0; k < n; ++k) {
    out.u[k] = s.u[k] + dt * (dl * n1.nu[k] + (1.0 - dl) * n2.nu[k]);
    b[k] = s.v[k] + dt * ((1.0 - gc) * sv2[k] + dl * n1.nv[k] + (1.0 - dl) * n2.nv[k]);
  }
  out.v = implicit_solve(gamma_faces(out.theta, spec), gc * dt, b, s2.v, info);
  return out;
}

}  // namespace

SimState step(const SimState& state, double dt, const CoefficientSpec& spec,
              const ModelParams& params, Scheme scheme, StepInfo* info) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
  SimState out = scheme == Scheme::imex1 ? step_imex1(state, dt, spec, params, info)
                                         : step_imex2(state, dt, spec, params, info);
  check_finite(out.v);
  check_finite(out.u);
  check_finite(out.theta);
  return out;
}

double stable_dt(const SimState& state, const CoefficientSpec& spec, const ModelParams& params,
                 const StepControl& control) {
  double fmax = 0.0;
  for (double th : state.theta.values) {
    const double x = std::max(th, 0.0);
    Vec2 fp{0.0, 0.0};
    for (int c = 0; c < spec.components() && c < 2; ++c) fp[c] = spec.f_prime()[c](x);
    fmax = std::max(fmax, euclidean(fp, state.grid().dim()));
  }
  const double speed = params.a + fmax;
  const double cap = control.cfl_fraction * state.grid().min_spacing() / speed;
  return std::min(control.dt_init, cap);
}

double w1p_norm_ut(const SimState& state, const ModelParams& params) {
  const ScalarField ut = recover_ut(state.v, state.u, params.a);
  return std::pow(lp_norm_p(ut, params.p) + lp_gradient_norm(ut, params.p), 1.0 / params.p);
}

Trajectory run(const SimState& initial, const CoefficientSpec& spec, const ModelParams& params,
               const StepControl& control, const MonitorConfig& monitor) {
  params.validate();
  control.validate();
  monitor.weights.validate();
  initial.validate();

  Trajectory traj;
  traj.w1p_threshold = control.watchdog.w1p_threshold.value_or(
      1e6 * std::max(w1p_norm_ut(initial, params), 1.0));
  traj.theta_inf_threshold = control.watchdog.theta_inf_threshold.value_or(
      1e6 * std::max(initial.theta.max_abs(), 1.0));

  auto sample = [&](const SimState& s, double dv_cum, double dt_cum) {
    MonitorRow r = measure(s, monitor.weights, monitor.ledger, spec, params);
    r.diss_v_cum = dv_cum;
    r.diss_theta_cum = dt_cum;
    traj.rows.push_back(r);
    return r;
  };
  auto tripped = [&](const SimState& s) {
    const double w = w1p_norm_ut(s, params);
    const double th = s.theta.max_abs();
    if (!(w <= traj.w1p_threshold) || !(th <= traj.theta_inf_threshold)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "watchdog tripped at t=%.6g: ||u_t||_W1p=%.6g, ||theta||_inf=%.6g", s.t, w,
                    th);
      traj.message = buf;
      return true;
    }
    return false;
  };

  SimState state = initial;
  MonitorRow last = sample(state, 0.0, 0.0);
  double diss_v_cum = 0.0;
  double diss_theta_cum = 0.0;
  double diss_v_prev = last.diss_v;
  double diss_theta_prev = last.diss_theta;

  if (tripped(state)) {
    traj.status = RunStatus::blowup_suspected;
    traj.final_state = state;
    annotate_residuals(traj.rows, monitor.ledger, params);
    fill_mass_residuals(traj.rows);
    return traj;
  }

  const double interval = control.sample_interval > 0.0 ? control.sample_interval : 0.0;
  long sample_index = 0;
  try {
    while (state.t < control.t_end) {
      const double dt_max = stable_dt(state, spec, params, control);
      double target = interval > 0.0
                          ? std::min(control.t_end, static_cast<double>(sample_index + 1) * interval)
                          : std::min(control.t_end, state.t + dt_max);
      // Snap a final sample that falls a rounding error short of t_end.
      if (control.t_end - target < 1e-9 * (interval > 0.0 ? interval : dt_max)) {
        target = control.t_end;
      }
      const long substeps =
          std::max(1L, static_cast<long>(std::ceil((target - state.t) / dt_max - 1e-9)));
      const double h = (target - state.t) / static_cast<double>(substeps);
      long taken = 0;
      for (long k = 0; k < substeps; ++k) {
        if (traj.steps >= control.max_steps) {
          traj.max_steps_reached = true;
          break;
        }
        StepInfo info;
        const bool last_sub = k + 1 == substeps;
        const double dt = last_sub ? target - state.t : h;
        state = step(state, dt, spec, params, control.scheme, &info);
        if (last_sub) state.t = target;
        ++traj.steps;
        ++taken;
        traj.cg_iterations += info.cg_iterations;
        const double dv = weighted_dissipation(state.v, params.p);
        const double dth = weighted_dissipation(state.theta, params.p);
        diss_v_cum += 0.5 * dt * (diss_v_prev + dv);
        diss_theta_cum += 0.5 * dt * (diss_theta_prev + dth);
        diss_v_prev = dv;
        diss_theta_prev = dth;
      }
      ++sample_index;
      if (taken > 0) sample(state, diss_v_cum, diss_theta_cum);
      if (tripped(state)) {
        traj.status = RunStatus::blowup_suspected;
        break;
      }
      if (traj.max_steps_reached) break;
    }
  } catch (const Error& e) {
    traj.status = RunStatus::step_failure;
    traj.message = e.what();
  }
  if (traj.status == RunStatus::completed && traj.max_steps_reached) {
    traj.message = "max_steps reached before t_end";
  }
  traj.final_state = state;
  annotate_residuals(traj.rows, monitor.ledger, params);
  fill_mass_residuals(traj.rows);
  return traj;
}

}  // namespace tvlab
