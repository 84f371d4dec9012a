#pragma once

// Seeded field ensembles, numerical checks of the Poincare-Hessian and
// Gagliardo-Nirenberg-type inequalities, calibration of their constants,
// the constants ledger, and the mass balance of a trajectory.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tvlab/coefficients.hpp"
#include "tvlab/energy_monitor.hpp"
#include "tvlab/grid.hpp"
#include "tvlab/ledger.hpp"

namespace tvlab {

/// Uniform double in [0, 1) from the top 53 bits, identical on every
/// platform (std::uniform_real_distribution is not).
double uniform01(std::mt19937_64& rng);

/// Random Neumann-compatible cosine series: band limit K uniform in 1..8,
/// coefficients uniform in [-1, 1] on every mode 1..K (1D) or every
/// (kx, ky) in [0, K]^2 except (0, 0) (2D).
ScalarField random_cosine_field(const Grid& g, std::mt19937_64& rng);
std::vector<ScalarField> cosine_ensemble(const Grid& g, int count, std::uint64_t seed);

struct PoincareEstimate {
  double value = 0.0;      // 1.5 * max_ratio
  double max_ratio = 0.0;  // max of int|phi - mean|^p / int|grad phi|^p
};

/// Throws DomainError if ensemble_size < 100 or every gradient vanishes.
PoincareEstimate estimate_poincare_constant(const Grid& g, double p, int ensemble_size,
                                            std::uint64_t seed = 1);

/// (max_i L_i / pi)^2, the inverse of the lowest nonzero Neumann eigenvalue.
double analytic_poincare_constant(const Grid& g);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// int|grad phi|^p <= c1_lem7 * int|grad phi|^(p-2)|D^2 phi|^2, with 1% slack.
InequalityCheck poincare_hessian_check(const ScalarField& phi, double p,
                                       const ConstantsLedger& ledger);

/// int|grad phi|^(p+2) <= mu W + mu G + K3 mu^(-n/(p-n)) G^lambda with
/// W = int|grad phi|^(p-2)|D^2 phi|^2, G = int|grad phi|^p; 1% slack.
/// Throws DomainError if mu <= 0 or p <= n.
InequalityCheck gn_interpolation_check(const ScalarField& phi, double p, double mu,
                                       const ConstantsLedger& ledger);

/// Log-spaced mu values in [0.01, 100] (including 0.1, 1 and 10) used for
/// calibration.
std::vector<double> calibration_mus();

/// 1.5 * max over a seeded ensemble and calibration_mus() of
/// (lhs - mu W - mu G) / (mu^(-n/(p-n)) G^lambda), floored at 0.
double calibrate_gn_constant(const Grid& g, double p, int ensemble_size,
                             std::uint64_t seed = 7);

struct LedgerOverrides {
  std::optional<double> C_P, K3, k1, k2, K1, K2, A, B, c5, c6, theta_radius;
};

/// Values the ledger needs from outside the formulas.
struct LedgerInputs {
  double C_P = 0.0;
  Provenance C_P_provenance = Provenance::analytic;
  double K3 = 0.0;
  Provenance K3_provenance = Provenance::ensemble_calibrated;
  double theta_radius = 0.0;
};

/// Fills every ledger field. Exact-formula entries are computed from the
/// stored inputs exactly as documented in ledger.hpp. Throws DomainError
/// if p <= n.
ConstantsLedger derive_constants(const ModelParams& params, const CoefficientSpec& spec,
                                const LedgerInputs& inputs,
                                const LedgerOverrides& overrides = {});

/// Default temperature window radius: max(2 ||theta0 - theta_star||_inf,
/// 1e-3 max(1, theta_star)).
double default_theta_radius(const ScalarField& theta0, double theta_star);

struct LedgerOptions {
  int poincare_ensemble = 1000;
  int gn_ensemble = 1000;
  std::uint64_t seed = 1;
};

/// Convenience: C_P (analytic for p = 2, ensemble otherwise) and K3 on the
/// given grid, then derive_constants().
ConstantsLedger compute_ledger(const Grid& g, const ModelParams& params,
                               const CoefficientSpec& spec, double theta_radius,
                               const LedgerOverrides& overrides = {},
                               const LedgerOptions& options = {});

/// JSON object: { "<name>": { "value": v, "provenance": "..." }, ..., "notes": {...} }.
std::string ledger_to_json(const ConstantsLedger& ledger, int indent = 2);

/// |mass(t) - mass(0) - int_0^t flux| per row, flux integrated by the
/// trapezoid rule over the sample times.
std::vector<double> mass_balance(const std::vector<MonitorRow>& rows);

/// Writes mass_balance() into rows[k].mass_residual.
void fill_mass_residuals(std::vector<MonitorRow>& rows);

}  // namespace tvlab
