#pragma once

// Composite Lyapunov energy y, dissipation h, comparison bound, decay fits
// and sampled differential-inequality residuals.

#include <string>
#include <vector>

#include "tvlab/coefficients.hpp"
#include "tvlab/dynamics.hpp"
#include "tvlab/ledger.hpp"

namespace tvlab {

/// Weights of y = int|grad v|^p + w_u_p int|grad u|^p
///               + w_theta_p int|grad theta|^p + w_u_p2 int|grad u|^(p+2).
struct EnergyWeights {
  double w_u_p = 0.0;
  double w_theta_p = 0.0;
  double w_u_p2 = 0.0;

  /// w_u_p = ledger.w_u_p, w_theta_p = A, w_u_p2 = B.
  static EnergyWeights from_ledger(const ConstantsLedger& ledger);
  /// Throws DomainError on negative or non-finite weights.
  void validate() const;
};

struct MonitorRow {
  double t = 0.0;
  double grad_v_p = 0.0;
  double grad_u_p = 0.0;
  double grad_u_p2 = 0.0;
  double grad_theta_p = 0.0;
  double y = 0.0;
  double h = 0.0;
  double diss_v_cum = 0.0;
  double diss_theta_cum = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double mass_residual = 0.0;
  double odi_residual = 0.0;
  double lemma4_residual = 0.0;
  double lemma4b_residual = 0.0;
  // Appended after the fixed columns.
  double grad_v_p2 = 0.0;
  double mass = 0.0;           // int (v - a u)
  double boundary_flux = 0.0;  // outward flux of f(theta)

  // Not serialized: instantaneous dissipation integrals.
  double diss_v = 0.0;
  double diss_theta = 0.0;
};

double composite_energy(const SimState& state, const EnergyWeights& weights,
                        const ModelParams& params);

/// int|grad v|^p + int|grad u|^p + int|grad u|^(p+2) + int|grad theta|^p,
/// the eta^p of the small-data condition.
double initial_energy_sum(const SimState& state, double p);

/// h = (k1 gamma_star / 2) int|grad v|^(p-2)|D^2 v|^2
///   + (A k2 D / 2) int|grad theta|^(p-2)|D^2 theta|^2 with A = w_theta_p.
double dissipation(const SimState& state, const EnergyWeights& weights,
                   const ConstantsLedger& ledger, const ModelParams& params);

/// Instantaneous quantities of one sample. Cumulative and residual
/// columns are left at zero for the caller.
MonitorRow measure(const SimState& state, const EnergyWeights& weights,
                   const ConstantsLedger& ledger, const CoefficientSpec& spec,
                   const ModelParams& params);

/// r = c5 y^lambda - (y' + 2 kappa y + h / 2) at interior samples, with y'
/// by centred differences on the (possibly non-uniform) sample times.
/// Endpoints are NaN. Throws DomainError with fewer than 3 samples.
std::vector<double> odi_residual(const std::vector<MonitorRow>& rows,
                                 const ConstantsLedger& ledger, const ModelParams& params);

/// c6 eta^p exp(-kappa t).
double comparison_bound(double t, double eta, const ConstantsLedger& ledger,
                        const ModelParams& params);

struct DecayFit {
  double kappa_fit = 0.0;
  double r_squared = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  int samples = 0;
};

/// Least squares on (t, ln value) after dropping the first 10% of samples
/// and values below 1e-14 * values[0]. Throws DomainError with fewer than
/// 10 usable samples.
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values);

struct RateResiduals {
  std::vector<double> exponent_p;
  std::vector<double> exponent_p2;
};

/// (2/a)^(q-1) int|grad v|^q - [(1/q) d/dt int|grad u|^q + (a/2) int|grad u|^q]
/// for q = p and q = p + 2. Endpoints NaN.
RateResiduals rate_residuals(const std::vector<MonitorRow>& rows, const ModelParams& params);

/// Fills odi_residual, lemma4_residual and lemma4b_residual of every row
/// (NaN where undefined). No-op with fewer than 3 rows.
void annotate_residuals(std::vector<MonitorRow>& rows, const ConstantsLedger& ledger,
                        const ModelParams& params);

/// Monitor CSV, schema v1: a "#schema=v1" line, a header, one row per
/// sample, 17 significant digits.
std::string monitor_csv_header();
std::string monitor_csv_row(const MonitorRow& row);
std::string monitor_csv(const std::vector<MonitorRow>& rows);

}  // namespace tvlab
