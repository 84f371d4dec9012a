#pragma once

// Temperature-dependent model ingredients gamma, Gamma, f, F, the scalar
// model parameters, and the parameter-smallness report.

#include <array>
#include <string>
#include <vector>

#include "tvlab/ledger.hpp"
#include "tvlab/polynomial.hpp"

namespace tvlab {

using Vec2 = std::array<double, 2>;

/// gamma (viscosity/elasticity), Gamma (heating), and the vector-valued
/// f (thermal stress) and F (thermal coupling), one polynomial per
/// spatial component.
class CoefficientSpec {
 public:
  CoefficientSpec() = default;
  CoefficientSpec(Polynomial gamma, Polynomial Gamma_cap, std::vector<Polynomial> f,
                  std::vector<Polynomial> F);

  const Polynomial& gamma() const { return gamma_; }
  const Polynomial& gamma_prime() const { return gamma_prime_; }
  const Polynomial& Gamma_cap() const { return Gamma_cap_; }
  const std::vector<Polynomial>& f() const { return f_; }
  const std::vector<Polynomial>& f_prime() const { return f_prime_; }
  const std::vector<Polynomial>& F() const { return F_; }
  int components() const { return static_cast<int>(f_.size()); }

 private:
  Polynomial gamma_, gamma_prime_, Gamma_cap_;
  std::vector<Polynomial> f_, f_prime_, F_;
};

struct CoefficientValues {
  double gamma = 0.0;
  double gamma_prime = 0.0;
  double Gamma_cap = 0.0;
  Vec2 f{0.0, 0.0};
  Vec2 f_prime{0.0, 0.0};
  Vec2 F{0.0, 0.0};
};

struct ModelParams {
  double a = 1.0;
  double D = 1.0;
  double p = 2.0;
  int n = 1;
  double theta_star = 0.0;

  /// Throws DomainError unless a > 0, D > 0, p >= 2, p > n, theta_star >= 0.
  void validate() const;
};

/// Temperatures in [-1e-10, 0) are clamped to 0; anything lower throws
/// DomainError("temperature negativity beyond tolerance").
CoefficientValues eval(const CoefficientSpec& spec, double theta);

/// Faster variant for inner loops: no range check; theta must be >= 0.
CoefficientValues eval_unchecked(const CoefficientSpec& spec, double theta);

/// Samples 1001 temperatures in [0, theta_max_check] and lists every
/// violated structural assumption (gamma > 0, Gamma >= 0, F(0) = 0,
/// component counts).
std::vector<std::string> validate(const CoefficientSpec& spec, double theta_max_check, int n);

struct SmallnessReport {
  double ratio_a = 0.0;
  double ratio_fF = 0.0;
  double delta_p = 0.0;
  bool damping_small = false;   // ratio_a <= delta_p
  bool coupling_small = false;  // ratio_fF <= delta_p
};

/// ratio_a = a / gamma(theta_star);
/// ratio_fF = |f'(theta_star)| |F(theta_star)| / (D gamma(theta_star)),
/// Euclidean norms.
SmallnessReport smallness_report(const CoefficientSpec& spec, const ModelParams& params,
                                 const ConstantsLedger& ledger);

double euclidean(const Vec2& v, int n);

}  // namespace tvlab
