#pragma once

// Linearly implicit IMEX time stepping of the (v, u, theta) system, step
// size control and the blow-up watchdog.

#include <optional>
#include <string>
#include <vector>

#include "tvlab/coefficients.hpp"
#include "tvlab/dynamics.hpp"
#include "tvlab/energy_monitor.hpp"
#include "tvlab/ledger.hpp"

namespace tvlab {

enum class Scheme {
  imex1,  // first-order split: implicit v, then u, then implicit theta
  imex2,  // ARS(2,2,2), second order, stiffly accurate
};

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct Watchdog {
  /// Limits on ||u_t||_{W^{1,p}} and ||theta||_inf. Unset means
  /// 1e6 * max(initial value, 1).
  std::optional<double> w1p_threshold;
  std::optional<double> theta_inf_threshold;
};

struct StepControl {
  double dt_init = 1e-3;
  double cfl_fraction = 0.4;
  double t_end = 1.0;
  long max_steps = 100000000;
  /// Spacing of monitor samples; <= 0 samples every step.
  double sample_interval = 0.0;
  Scheme scheme = Scheme::imex1;
  Watchdog watchdog;

  void validate() const;
};

enum class RunStatus { completed, blowup_suspected, step_failure };
const char* to_string(RunStatus s);

struct Trajectory {
  std::vector<MonitorRow> rows;
  RunStatus status = RunStatus::completed;
  std::string message;
  long steps = 0;
  bool max_steps_reached = false;
  double w1p_threshold = 0.0;
  double theta_inf_threshold = 0.0;
  long cg_iterations = 0;
  std::optional<SimState> final_state;

  std::vector<double> times() const;
};

struct MonitorConfig {
  EnergyWeights weights;
  ConstantsLedger ledger;
};

/// Per-step statistics from the linear solves.
struct StepInfo {
  long cg_iterations = 0;
};

/// One time step of size dt. Throws StepFailure on solver failure or
/// non-finite data.
SimState step(const SimState& state, double dt, const CoefficientSpec& spec,
              const ModelParams& params, Scheme scheme = Scheme::imex1,
              StepInfo* info = nullptr);

/// Largest step allowed by the explicit transport terms:
/// min(dt_init, cfl * h_min / (a + max |f'(theta)|)).
double stable_dt(const SimState& state, const CoefficientSpec& spec, const ModelParams& params,
                 const StepControl& control);

/// (int |u_t|^p + int |grad u_t|^p)^(1/p) with u_t = v - a u.
double w1p_norm_ut(const SimState& state, const ModelParams& params);

/// Advances `initial` to control.t_end, emitting a monitor row at t = 0 and
/// every sample_interval (and at the final time). Residual columns are
/// filled on completion. Solver failures end the run with status
/// step_failure rather than throwing.
Trajectory run(const SimState& initial, const CoefficientSpec& spec, const ModelParams& params,
               const StepControl& control, const MonitorConfig& monitor);

}  // namespace tvlab
