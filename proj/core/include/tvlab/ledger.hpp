#pragma once

#include <map>
#include <string>

namespace tvlab {

/// Where a ledger entry came from.
enum class Provenance {
  exact_formula,
  analytic,
  ensemble_calibrated,
  heuristic_default,
  user_override,
};

const char* to_string(Provenance p);

/// Every named constant of the small-data decay analysis for one model
/// configuration. Populated by derive_constants() in inequality_lab.hpp.
struct ConstantsLedger {
  int n = 1;
  double p = 2.0;
  double a = 0.0;
  double D = 0.0;

  // Poincare constant of the zero-mean inequality and the Hessian-form
  // constant (p - 2 + sqrt(n))^2 * C_P^(2/p) derived from it.
  double C_P = 0.0;
  double c1_lem7 = 0.0;

  double delta1 = 0.0;   // 1 / (32 (1 + 2^p) c1_lem7)
  double delta_p = 0.0;  // min{delta1, (k1 k2 / (8 K1 K2))^(1/p)}
  double lambda = 0.0;   // (p + 2 - n) / (p - n)
  double kappa = 0.0;

  double k1 = 0.0, k2 = 0.0, K1 = 0.0, K2 = 0.0, K3 = 0.0;

  // Temperature window [theta_star - r, theta_star + r] intersected with
  // [0, inf), and the coefficient bounds over it.
  double theta_radius = 0.0;
  double gamma_star = 0.0;       // inf gamma
  double gamma_deriv_sup = 0.0;  // sup |gamma'|
  double f_star = 0.0;           // sup |f'|
  double F_star = 0.0;           // sup |F|
  double Gamma_star = 0.0;       // sup Gamma

  double A = 0.0, B = 0.0;
  double ode_c1 = 0.0, ode_c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0;
  double eta0 = 0.0;

  /// Weight of the grad-u L^p term in the composite energy, 8 a^(p-1) gamma_star delta1.
  double w_u_p = 0.0;

  std::map<std::string, Provenance> provenance;
  std::map<std::string, std::string> notes;
};

}  // namespace tvlab
