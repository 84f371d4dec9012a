#pragma once

// Scenario files: turning a Config into model objects, running them and
// writing monitor.csv / ledger.json / summary.json, plus parameter sweeps
// and the constants / inequality reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvlab/coefficients.hpp"
#include "tvlab/config.hpp"
#include "tvlab/energy_monitor.hpp"
#include "tvlab/inequality_lab.hpp"
#include "tvlab/integrator.hpp"

namespace tvlab {

struct CosineMode {
  int kx = 0;
  int ky = 0;
  double amplitude = 0.0;
};

/// constant + sum amplitude * cos(kx pi x / Lx) cos(ky pi y / Ly).
struct Profile {
  double constant = 0.0;
  std::vector<CosineMode> modes;

  ScalarField evaluate(const Grid& g, double mode_scale = 1.0) const;
};

struct WeightOverrides {
  std::optional<double> w_u_p, w_theta_p, w_u_p2;
};

struct ScenarioConfig {
  Grid grid{1.0, 256};
  ModelParams params;
  CoefficientSpec spec;
  Profile u0, ut0, theta0;
  double eta_scale = 1.0;    // multiplies the u and u_t profiles
  double theta_scale = 1.0;  // multiplies the cosine part of theta
  StepControl control;
  WeightOverrides weights;
  LedgerOverrides ledger;
  LedgerOptions ledger_options;
  double theta_max_check = 0.0;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int inequality_ensemble = 100;
  Config resolved;  // every recognised key with its effective value
};

/// Parses and type-checks; throws ConfigError with line context.
ScenarioConfig load_scenario(const Config& cfg);
ScenarioConfig load_scenario_file(const std::string& path);

/// Structural violations (coefficient assumptions, negative initial
/// temperature). Empty means runnable.
std::vector<std::string> validate_scenario(const ScenarioConfig& sc);

SimState initial_state(const ScenarioConfig& sc);

struct InitialReport {
  double theta_deviation = 0.0;  // ||theta0 - theta_star||_inf
  double energy_sum = 0.0;       // eta^p
  double eta = 0.0;
};
InitialReport initial_report(const SimState& s0, const ModelParams& params);

struct ScenarioResult {
  Trajectory trajectory;
  ConstantsLedger ledger;
  EnergyWeights weights;
  SmallnessReport smallness;
  InitialReport initial;
  std::optional<DecayFit> fit;
  std::string fit_error;
  double max_bound_ratio = 0.0;  // max over t > 0 of y / comparison_bound
};

ConstantsLedger scenario_ledger(const ScenarioConfig& sc, const SimState& s0);
EnergyWeights scenario_weights(const ScenarioConfig& sc, const ConstantsLedger& ledger);

/// Runs without touching the filesystem. Throws ConfigError if
/// validate_scenario() reports violations.
ScenarioResult simulate(const ScenarioConfig& sc);

/// simulate() and write monitor.csv, ledger.json, summary.json,
/// config_resolved.cfg and initial_fields.csv into `dir`.
ScenarioResult run_scenario(const ScenarioConfig& sc, const std::string& dir);

std::string summary_json(const ScenarioConfig& sc, const ScenarioResult& r);
std::string initial_fields_csv(const SimState& s0, double a);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepConfig {
  Config base;
  std::vector<SweepAxis> axes;
  int workers = 1;
  long max_runs = 1000;
  std::string output_dir = "sweep_out";
};

SweepConfig load_sweep(const Config& cfg, const std::string& base_dir = ".");
SweepConfig load_sweep_file(const std::string& path);

struct SweepRow {
  std::vector<std::string> values;  // one per axis
  std::string status;
  double kappa_fit = 0.0;
  double y0 = 0.0;
  double y_max = 0.0;
  bool watchdog = false;
  std::string message;
};

/// Runs every grid cell (last axis fastest) into <dir>/cell_NNNN and
/// writes <dir>/sweep.csv in grid order. Cell failures become rows.
std::vector<SweepRow> run_sweep(const SweepConfig& sw, const std::string& dir);
std::string sweep_csv(const SweepConfig& sw, const std::vector<SweepRow>& rows);

/// Ledger plus smallness report as JSON.
std::string constants_report(const ScenarioConfig& sc);

/// Ensemble Poincare / interpolation report as JSON over
/// inequality_ensemble fields seeded from `seed`.
std::string inequality_report(const ScenarioConfig& sc);

}  // namespace tvlab
