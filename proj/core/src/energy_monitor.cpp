#include "tvlab/energy_monitor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tvlab/errors.hpp"

namespace tvlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Centred derivative on a non-uniform sample grid (exact for quadratics).
double centred_derivative(double t0, double y0, double t1, double y1, double t2, double y2) {
  const double h0 = t1 - t0;
  const double h1 = t2 - t1;
  return (-h1 / (h0 * (h0 + h1))) * y0 + ((h1 - h0) / (h0 * h1)) * y1 +
         (h0 / (h1 * (h0 + h1))) * y2;
}

void require_samples(const std::vector<MonitorRow>& rows) {
  if (rows.size() < 3) throw DomainError("at least 3 samples required");
}

}  // namespace

EnergyWeights EnergyWeights::from_ledger(const ConstantsLedger& ledger) {
  return EnergyWeights{ledger.w_u_p, ledger.A, ledger.B};
}

void EnergyWeights::validate() const {
  for (double w : {w_u_p, w_theta_p, w_u_p2}) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("energy weights must be finite and >= 0");
  }
}

double composite_energy(const SimState& state, const EnergyWeights& w, const ModelParams& params) {
  const double p = params.p;
  return lp_gradient_norm(state.v, p) + w.w_u_p * lp_gradient_norm(state.u, p) +
         w.w_theta_p * lp_gradient_norm(state.theta, p) +
         w.w_u_p2 * lp_gradient_norm(state.u, p + 2.0);
}

double initial_energy_sum(const SimState& s, double p) {
  return lp_gradient_norm(s.v, p) + lp_gradient_norm(s.u, p) + lp_gradient_norm(s.u, p + 2.0) +
         lp_gradient_norm(s.theta, p);
}

double dissipation(const SimState& state, const EnergyWeights& w, const ConstantsLedger& ledger,
                   const ModelParams& params) {
  const double p = params.p;
  const double cv = 0.5 * ledger.k1 * ledger.gamma_star;
  const double ct = 0.5 * w.w_theta_p * ledger.k2 * params.D;
  double h = 0.0;
  if (cv != 0.0) h += cv * weighted_dissipation(state.v, p);
  if (ct != 0.0) h += ct * weighted_dissipation(state.theta, p);
  return h;
}

MonitorRow measure(const SimState& state, const EnergyWeights& w, const ConstantsLedger& ledger,
                   const CoefficientSpec& spec, const ModelParams& params) {
  const double p = params.p;
  MonitorRow r;
  r.t = state.t;
  r.grad_v_p = lp_gradient_norm(state.v, p);
  r.grad_u_p = lp_gradient_norm(state.u, p);
  r.grad_u_p2 = lp_gradient_norm(state.u, p + 2.0);
  r.grad_theta_p = lp_gradient_norm(state.theta, p);
  r.grad_v_p2 = lp_gradient_norm(state.v, p + 2.0);
  r.y = r.grad_v_p + w.w_u_p * r.grad_u_p + w.w_theta_p * r.grad_theta_p +
        w.w_u_p2 * r.grad_u_p2;
  r.diss_v = weighted_dissipation(state.v, p);
  r.diss_theta = weighted_dissipation(state.theta, p);
  r.h = 0.5 * ledger.k1 * ledger.gamma_star * r.diss_v +
        0.5 * w.w_theta_p * ledger.k2 * params.D * r.diss_theta;
  r.theta_min = state.theta.min();
  r.theta_max = state.theta.max();
  r.mass = mass(state, params.a);
  r.boundary_flux = mass_flux(state, spec);
  return r;
}

std::vector<double> odi_residual(const std::vector<MonitorRow>& rows,
                                 const ConstantsLedger& ledger, const ModelParams&) {
  require_samples(rows);
  std::vector<double> out(rows.size(), kNaN);
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const double dy = centred_derivative(rows[k - 1].t, rows[k - 1].y, rows[k].t, rows[k].y,
                                         rows[k + 1].t, rows[k + 1].y);
    const double y = rows[k].y;
    out[k] = ledger.c5 * std::pow(y, ledger.lambda) -
             (dy + 2.0 * ledger.kappa * y + 0.5 * rows[k].h);
  }
  return out;
}

double comparison_bound(double t, double eta, const ConstantsLedger& ledger,
                        const ModelParams& params) {
  return ledger.c6 * std::pow(eta, params.p) * std::exp(-ledger.kappa * t);
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw DomainError("times/values length mismatch");
  if (values.empty()) throw DomainError("fewer than 10 usable samples");
  const std::size_t skip = times.size() / 10;
  const double floor = 1e-14 * std::abs(values[0]);
  std::vector<double> ts;
  std::vector<double> ls;
  for (std::size_t k = skip; k < times.size(); ++k) {
    if (!(values[k] > floor) || !std::isfinite(values[k])) continue;
    ts.push_back(times[k]);
    ls.push_back(std::log(values[k]));
  }
  if (ts.size() < 10) throw DomainError("fewer than 10 usable samples");

  const double m = static_cast<double>(ts.size());
  double tm = 0.0;
  double lm = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    tm += ts[k];
    lm += ls[k];
  }
  tm /= m;
  lm /= m;
  double stt = 0.0;
  double stl = 0.0;
  double sll = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - tm) * (ts[k] - tm);
    stl += (ts[k] - tm) * (ls[k] - lm);
    sll += (ls[k] - lm) * (ls[k] - lm);
  }
  if (stt == 0.0) throw DomainError("degenerate fit window");
  // A flat series (up to round-off in the logs) is fitted exactly.
  const bool flat = std::all_of(ls.begin(), ls.end(), [&](double l) {
    return std::abs(l - ls.front()) <= 1e-14 * std::max(1.0, std::abs(ls.front()));
  });
  DecayFit fit;
  fit.kappa_fit = flat ? 0.0 : -stl / stt;
  fit.r_squared = flat ? 1.0 : (stl * stl) / (stt * sll);
  fit.window_start = ts.front();
  fit.window_end = ts.back();
  fit.samples = static_cast<int>(ts.size());
  return fit;
}

RateResiduals rate_residuals(const std::vector<MonitorRow>& rows, const ModelParams& params) {
  require_samples(rows);
  const double a = params.a;
  const double p = params.p;
  RateResiduals out{std::vector<double>(rows.size(), kNaN),
                     std::vector<double>(rows.size(), kNaN)};
  const double c4 = std::pow(2.0 / a, p - 1.0);
  const double c4b = std::pow(2.0 / a, p + 1.0);
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const MonitorRow& r0 = rows[k - 1];
    const MonitorRow& r1 = rows[k];
    const MonitorRow& r2 = rows[k + 1];
    const double du = centred_derivative(r0.t, r0.grad_u_p, r1.t, r1.grad_u_p, r2.t, r2.grad_u_p);
    const double du2 =
        centred_derivative(r0.t, r0.grad_u_p2, r1.t, r1.grad_u_p2, r2.t, r2.grad_u_p2);
    out.exponent_p[k] = c4 * r1.grad_v_p - (du / p + 0.5 * a * r1.grad_u_p);
    out.exponent_p2[k] = c4b * r1.grad_v_p2 - (du2 / (p + 2.0) + 0.5 * a * r1.grad_u_p2);
  }
  return out;
}

void annotate_residuals(std::vector<MonitorRow>& rows, const ConstantsLedger& ledger,
                        const ModelParams& params) {
  if (rows.size() < 3) {
    for (auto& r : rows) r.odi_residual = r.lemma4_residual = r.lemma4b_residual = kNaN;
    return;
  }
  const auto odi = odi_residual(rows, ledger, params);
  const auto lem = rate_residuals(rows, params);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].odi_residual = odi[k];
    rows[k].lemma4_residual = lem.exponent_p[k];
    rows[k].lemma4b_residual = lem.exponent_p2[k];
  }
}

std::string monitor_csv_header() {
  return "t,grad_v_p,grad_u_p,grad_u_p2,grad_theta_p,y,h,diss_v_cum,diss_theta_cum,"
         "theta_min,theta_max,mass_residual,odi_residual,lemma4_residual,lemma4b_residual,"
         "grad_v_p2,mass,boundary_flux";
}

std::string monitor_csv_row(const MonitorRow& r) {
  const double cols[] = {r.t,           r.grad_v_p,        r.grad_u_p,     r.grad_u_p2,
                         r.grad_theta_p, r.y,              r.h,            r.diss_v_cum,
                         r.diss_theta_cum, r.theta_min,    r.theta_max,    r.mass_residual,
                         r.odi_residual, r.lemma4_residual, r.lemma4b_residual,
                         r.grad_v_p2,   r.mass,            r.boundary_flux};
  std::string line;
  char buf[40];
  for (std::size_t k = 0; k < std::size(cols); ++k) {
    if (k) line += ',';
    if (std::isnan(cols[k])) {
      line += "nan";
    } else {
      std::snprintf(buf, sizeof buf, "%.16e", cols[k]);
      line += buf;
    }
  }
  return line;
}

std::string monitor_csv(const std::vector<MonitorRow>& rows) {
  std::string out = "#schema=v1\n" + monitor_csv_header() + "\n";
  for (const auto& r : rows) out += monitor_csv_row(r) + "\n";
  return out;
}

}  // namespace tvlab
