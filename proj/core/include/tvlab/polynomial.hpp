#pragma once

#include <string>
#include <vector>

namespace tvlab {

/// Real polynomial in one variable, coefficients in ascending powers.
/// A constant is the degree-0 case; the empty list is the zero polynomial.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);
  static Polynomial constant(double c) { return Polynomial({c}); }

  double operator()(double x) const;
  Polynomial derivative() const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Value at 0, i.e. the constant term.
  double constant_term() const { return coeffs_.empty() ? 0.0 : coeffs_.front(); }
  bool is_zero() const;

  /// "1 + 2*x^2"-style rendering for reports.
  std::string to_string(const char* var = "T") const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

}  // namespace tvlab
