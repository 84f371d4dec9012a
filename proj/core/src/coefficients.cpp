#include "tvlab/coefficients.hpp"

#include <cmath>
#include <cstdio>

#include "tvlab/errors.hpp"

namespace tvlab {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact_formula: return "exact-formula";
    case Provenance::analytic: return "analytic";
    case Provenance::ensemble_calibrated: return "ensemble-calibrated";
    case Provenance::heuristic_default: return "heuristic-default";
    case Provenance::user_override: return "user-override";
  }
  return "unknown";
}

void ModelParams::validate() const {
  if (!(a > 0.0)) throw DomainError("model parameter a must be positive");
  if (!(D > 0.0)) throw DomainError("model parameter D must be positive");
  if (!(p >= 2.0)) throw DomainError("model parameter p must satisfy p >= 2");
  if (n != 1 && n != 2) throw DomainError("spatial dimension must be 1 or 2");
  if (!(p > n)) throw DomainError("model parameter p must exceed the dimension n");
  if (!(theta_star >= 0.0)) throw DomainError("theta_star must be nonnegative");
}

CoefficientSpec::CoefficientSpec(Polynomial gamma, Polynomial Gamma_cap, std::vector<Polynomial> f,
                                 std::vector<Polynomial> F)
    : gamma_(std::move(gamma)),
      gamma_prime_(gamma_.derivative()),
      Gamma_cap_(std::move(Gamma_cap)),
      f_(std::move(f)),
      F_(std::move(F)) {
  if (f_.size() > 2 || F_.size() > 2) throw DomainError("at most two vector components");
  for (const auto& q : f_) f_prime_.push_back(q.derivative());
}

CoefficientValues eval_unchecked(const CoefficientSpec& spec, double theta) {
  CoefficientValues out;
  out.gamma = spec.gamma()(theta);
  out.gamma_prime = spec.gamma_prime()(theta);
  out.Gamma_cap = spec.Gamma_cap()(theta);
  for (int c = 0; c < spec.components(); ++c) {
    out.f[c] = spec.f()[c](theta);
    out.f_prime[c] = spec.f_prime()[c](theta);
  }
  for (std::size_t c = 0; c < spec.F().size(); ++c) out.F[c] = spec.F()[c](theta);
  return out;
}

CoefficientValues eval(const CoefficientSpec& spec, double theta) {
  if (!std::isfinite(theta)) throw DomainError("temperature is not finite");
  if (theta < -1e-10) throw DomainError("temperature negativity beyond tolerance");
  return eval_unchecked(spec, theta < 0.0 ? 0.0 : theta);
}

std::vector<std::string> validate(const CoefficientSpec& spec, double theta_max_check, int n) {
  std::vector<std::string> violations;
  char buf[160];
  if (spec.components() != n || static_cast<int>(spec.F().size()) != n) {
    std::snprintf(buf, sizeof buf, "f and F must have %d component(s), got %d and %zu", n,
                  spec.components(), spec.F().size());
    violations.emplace_back(buf);
  }
  if (!(theta_max_check > 0.0)) {
    violations.emplace_back("theta_max_check must be positive");
    return violations;
  }

  constexpr int samples = 1001;
  bool gamma_bad = false;
  bool heat_bad = false;
  for (int k = 0; k < samples && !(gamma_bad && heat_bad); ++k) {
    const double theta = theta_max_check * k / (samples - 1);
    if (!gamma_bad && !(spec.gamma()(theta) > 0.0)) {
      std::snprintf(buf, sizeof buf, "γ ≤ 0 at Θ ≈ %.6g", theta);
      violations.emplace_back(buf);
      gamma_bad = true;
    }
    if (!heat_bad && !(spec.Gamma_cap()(theta) >= 0.0)) {
      std::snprintf(buf, sizeof buf, "Γ < 0 at Θ ≈ %.6g", theta);
      violations.emplace_back(buf);
      heat_bad = true;
    }
  }
  for (std::size_t c = 0; c < spec.F().size(); ++c) {
    if (spec.F()[c].constant_term() != 0.0) {
      std::snprintf(buf, sizeof buf, "F(0) ≠ 0 (component %zu equals %.6g)", c,
                    spec.F()[c].constant_term());
      violations.emplace_back(buf);
    }
  }
  return violations;
}

double euclidean(const Vec2& v, int n) {
  return n == 2 ? std::hypot(v[0], v[1]) : std::abs(v[0]);
}

SmallnessReport smallness_report(const CoefficientSpec& spec, const ModelParams& params,
                                 const ConstantsLedger& ledger) {
  const CoefficientValues c = eval(spec, params.theta_star);
  if (!(c.gamma > 0.0)) throw DomainError("gamma(theta_star) must be positive");
  SmallnessReport r;
  r.delta_p = ledger.delta_p;
  r.ratio_a = params.a / c.gamma;
  r.ratio_fF = euclidean(c.f_prime, params.n) * euclidean(c.F, params.n) / (params.D * c.gamma);
  r.damping_small = r.ratio_a <= r.delta_p;
  r.coupling_small = r.ratio_fF <= r.delta_p;
  return r;
}

}  // namespace tvlab
