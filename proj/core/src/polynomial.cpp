#include "tvlab/polynomial.hpp"

#include <cmath>
#include <cstdio>

#include "tvlab/errors.hpp"

namespace tvlab {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("polynomial coefficients must be finite");
  }
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

bool Polynomial::is_zero() const {
  for (double c : coeffs_) {
    if (c != 0.0) return false;
  }
  return true;
}

std::string Polynomial::to_string(const char* var) const {
  std::string out;
  char buf[64];
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0.0 && coeffs_.size() > 1) continue;
    if (!out.empty()) out += " + ";
    if (k == 0) {
      std::snprintf(buf, sizeof buf, "%.17g", coeffs_[k]);
    } else if (k == 1) {
      std::snprintf(buf, sizeof buf, "%.17g*%s", coeffs_[k], var);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g*%s^%zu", coeffs_[k], var, k);
    }
    out += buf;
  }
  return out.empty() ? "0" : out;
}

}  // namespace tvlab
