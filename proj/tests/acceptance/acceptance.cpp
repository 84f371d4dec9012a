// Acceptance suite A1-A13. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
//
// usage: tvlab_acceptance [output_dir]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tvlab/errors.hpp"
#include "tvlab/scenario.hpp"

using namespace tvlab;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
const std::string kConfigs = TVLAB_CONFIG_DIR;
fs::path g_out = "acceptance_out";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CoefficientSpec a1_spec() {
  return CoefficientSpec(Polynomial({1, 1}), Polynomial({0, 1}), {Polynomial({0, 1})},
                         {Polynomial({0, 1})});
}

// A5 run, shared by A5-A9 and A13.
struct SmallData {
  ScenarioConfig sc;
  ScenarioResult r;
  bool ok = false;
  std::string error;
};

SmallData& small_data() {
  static SmallData sd = [] {
    SmallData s;
    try {
      s.sc = load_scenario_file(kConfigs + "/small_data.cfg");
      s.r = run_scenario(s.sc, (g_out / "small_data").string());
      s.ok = true;
    } catch (const std::exception& e) {
      s.error = e.what();
    }
    return s;
  }();
  return sd;
}

Outcome a1() {
  const Grid g(1.0, 256);
  ModelParams p;
  p.a = 0.1;
  p.D = 1.0;
  p.theta_star = 1.0;
  const auto spec = a1_spec();
  SimState s{ScalarField(g), ScalarField(g), ScalarField(g, 1.0)};
  double worst = 0.0;
  const double dt = 0.01;
  for (int k = 1; k <= 1000; ++k) {
    s = step(s, dt, spec, p, Scheme::imex1);
    if (k % 10 == 0) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max({worst, std::abs(s.v[i]), std::abs(s.u[i]), std::abs(s.theta[i] - 1.0)});
      }
    }
  }
  // The shipped config must agree.
  ScenarioConfig sc = load_scenario_file(kConfigs + "/equilibrium.cfg");
  const ScenarioResult r = simulate(sc);
  double ymax = 0.0;
  for (const auto& row : r.trajectory.rows) {
    ymax = std::max(ymax, row.y);
    worst = std::max({worst, std::abs(row.theta_min - 1.0), std::abs(row.theta_max - 1.0)});
  }
  const bool ok = worst <= 1e-10 && ymax <= 1e-20 && r.trajectory.status == RunStatus::completed;
  return {ok, fmt("max deviation %.3e over 100 samples to t=10, y_max %.3e", worst, ymax)};
}

double a2_error(double dt) {
  const Grid g(1.0, 32);
  ModelParams p;
  p.a = 0.1;
  const SimState s(ScalarField(g, 1.0 + p.a), ScalarField(g, 1.0), ScalarField(g, 1.0));
  StepControl c;
  c.dt_init = dt;
  c.t_end = 1.0;
  c.sample_interval = 0.1;
  c.scheme = Scheme::imex1;
  MonitorConfig m;
  m.weights = EnergyWeights{1, 1, 0};
  const Trajectory tr = run(s, a1_spec(), p, c, m);
  if (tr.status != RunStatus::completed) return INFINITY;
  double e = 0.0;
  for (double x : tr.final_state->u.values) e = std::max(e, std::abs(x - 2.0));
  return e;
}

Outcome a2() {
  const double e1 = a2_error(1e-4);
  const double e2 = a2_error(5e-5);
  const double ratio = e1 / e2;
  const bool ok = e1 <= 1e-3 && ratio >= 1.8 && ratio <= 2.2;
  return {ok, fmt("|u(1)-2| = %.3e at dt=1e-4, %.3e at dt=5e-5, ratio %.3f", e1, e2, ratio)};
}

Outcome a3() {
  const ScenarioConfig sc = load_scenario_file(kConfigs + "/heat_decay.cfg");
  const ScenarioResult r = run_scenario(sc, (g_out / "heat_decay").string());
  std::vector<double> t, y;
  for (const auto& row : r.trajectory.rows) {
    t.push_back(row.t);
    y.push_back(row.grad_theta_p);
  }
  const DecayFit f = decay_fit(t, y);
  const double target = 2.0 * pi * pi;
  const double rel = std::abs(f.kappa_fit - target) / target;
  const bool ok = r.trajectory.status == RunStatus::completed && rel <= 0.02 && f.r_squared >= 0.999;
  return {ok, fmt("kappa_fit %.6f vs 2pi^2 = %.6f (rel err %.2e), r^2 %.8f", f.kappa_fit, target,
                  rel, f.r_squared)};
}

Outcome a4() {
  ScenarioConfig sc = load_scenario_file(kConfigs + "/small_data.cfg");
  const double eps = 0.05;
  sc.theta_scale = eps / 0.01;  // theta cosine amplitude 0.01 in the file
  sc.theta_max_check = std::max(sc.theta_max_check, 1.0 + 10 * eps);
  const ScenarioResult r = run_scenario(sc, (g_out / "confinement").string());
  const double dev0 = r.initial.theta_deviation;
  double tmin = INFINITY;
  double dev = 0.0;
  for (const auto& row : r.trajectory.rows) {
    tmin = std::min(tmin, row.theta_min);
    dev = std::max({dev, std::abs(row.theta_min - 1.0), std::abs(row.theta_max - 1.0)});
  }
  const bool ok = r.trajectory.status == RunStatus::completed &&
                  std::abs(dev0 - eps) <= 1e-3 * eps && tmin >= -1e-8 && dev <= 2 * eps;
  return {ok, fmt("||theta0-1|| = %.4f, min theta %.6f, max ||theta-1|| %.6f (<= %.2f), status %s",
                  dev0, tmin, dev, 2 * eps, to_string(r.trajectory.status))};
}

Outcome a5() {
  auto& sd = small_data();
  if (!sd.ok) return {false, "run failed: " + sd.error};
  const auto& tr = sd.r.trajectory;
  const bool completed = tr.status == RunStatus::completed && !tr.max_steps_reached &&
                         tr.rows.back().t == sd.sc.control.t_end;
  const bool fit = sd.r.fit && sd.r.fit->kappa_fit > 0.0 && sd.r.fit->r_squared >= 0.99;
  const bool bound = sd.r.max_bound_ratio <= 1.05;
  return {completed && fit && bound,
          fmt("status %s at t=%g, kappa_fit %.5f (ledger kappa %.5f), r^2 %.6f, max y/bound %.4f",
              to_string(tr.status), tr.rows.back().t, sd.r.fit ? sd.r.fit->kappa_fit : NAN,
              sd.r.ledger.kappa, sd.r.fit ? sd.r.fit->r_squared : NAN, sd.r.max_bound_ratio)};
}

double finite_min(const std::vector<MonitorRow>& rows, double MonitorRow::*col) {
  double m = INFINITY;
  for (const auto& r : rows) {
    if (std::isfinite(r.*col)) m = std::min(m, r.*col);
  }
  return m;
}

Outcome a6() {
  auto& sd = small_data();
  if (!sd.ok) return {false, "run failed: " + sd.error};
  const auto& rows = sd.r.trajectory.rows;
  const double m = finite_min(rows, &MonitorRow::odi_residual);
  const double tol = -1e-3 * rows.front().y;
  return {m >= tol, fmt("min residual %.3e >= %.3e", m, tol)};
}

Outcome a7() {
  auto& sd = small_data();
  if (!sd.ok) return {false, "run failed: " + sd.error};
  const auto& rows = sd.r.trajectory.rows;
  const MonitorRow& r0 = rows.front();
  const double s4 = r0.grad_v_p + r0.grad_u_p;
  const double s4b = r0.grad_v_p2 + r0.grad_u_p2;
  const double m4 = finite_min(rows, &MonitorRow::lemma4_residual);
  const double m4b = finite_min(rows, &MonitorRow::lemma4b_residual);
  const bool ok = m4 >= -1e-6 * s4 && m4b >= -1e-6 * s4b;
  return {ok, fmt("min exponent-p residual %.3e (tol %.3e), min exponent-(p+2) residual %.3e (tol %.3e)",
                  m4, -1e-6 * s4, m4b, -1e-6 * s4b)};
}

Outcome a8() {
  auto& sd = small_data();
  if (!sd.ok) return {false, "run failed: " + sd.error};
  const auto& rows = sd.r.trajectory.rows;
  const std::size_t start = rows.size() - std::max<std::size_t>(1, rows.size() / 10) - 1;
  const double v_tot = rows.back().diss_v_cum;
  const double t_tot = rows.back().diss_theta_cum;
  const double v_inc = v_tot - rows[start].diss_v_cum;
  const double t_inc = t_tot - rows[start].diss_theta_cum;
  const bool ok = std::isfinite(v_tot) && std::isfinite(t_tot) && v_inc <= 0.01 * v_tot &&
                  t_inc <= 0.01 * t_tot;
  return {ok, fmt("final-10%% increase: v %.3e of %.3e, theta %.3e of %.3e", v_inc, v_tot, t_inc,
                  t_tot)};
}

Outcome a9() {
  auto& sd = small_data();
  if (!sd.ok) return {false, "run failed: " + sd.error};
  const SimState s0 = initial_state(sd.sc);
  double scale = 0.0;
  for (std::size_t k = 0; k < s0.v.size(); ++k) scale += std::abs(s0.v[k] - sd.sc.params.a * s0.u[k]);
  scale *= s0.grid().cell_volume();
  const auto& rows = sd.r.trajectory.rows;
  double mmax = 0.0;
  for (const auto& r : rows) mmax = std::max(mmax, r.mass_residual);
  const double tol = 1e-6 * std::max(1.0, scale);

  ScenarioConfig fine = sd.sc;
  fine.grid = Grid(fine.grid.length(0), 2 * fine.grid.cells(0));
  fine.control.dt_init *= 0.5;
  fine.control.sample_interval *= 0.5;
  const ScenarioResult rf = simulate(fine);
  const double coarse_end = rows.back().mass_residual;
  const double fine_end = rf.trajectory.rows.back().mass_residual;
  const double shrink = coarse_end / fine_end;
  const bool ok = mmax <= tol && rf.trajectory.status == RunStatus::completed && shrink >= 3.0;
  return {ok, fmt("max residual %.3e <= %.3e; at t_end %.3e -> %.3e under refinement (%.2fx)",
                  mmax, tol, coarse_end, fine_end, shrink)};
}

ConstantsLedger ledger_for(const Grid& g, double p, double C_P) {
  ModelParams mp;
  mp.p = p;
  mp.n = g.dim();
  mp.a = 0.05;
  mp.theta_star = 1.0;
  LedgerInputs in;
  in.C_P = C_P;
  in.K3 = 1.0;
  in.theta_radius = 0.02;
  const CoefficientSpec spec(Polynomial::constant(1), Polynomial::constant(1),
                             std::vector<Polynomial>(g.dim(), Polynomial({0, 0.01})),
                             std::vector<Polynomial>(g.dim(), Polynomial({0, 0.01})));
  return derive_constants(mp, spec, in);
}

Outcome a10() {
  std::string detail;
  bool ok = true;
  const Grid g1(1.0, 256);
  const Grid g2(1.0, 1.0, 64, 64);
  for (const Grid* g : {&g1, &g2}) {
    for (double p : {2.0, 3.0, 4.0}) {
      const double cp = p == 2.0 ? analytic_poincare_constant(*g)
                                 : estimate_poincare_constant(*g, p, 1000).value;
      ConstantsLedger L;
      L.c1_lem7 = std::pow(p - 2.0 + std::sqrt(double(g->dim())), 2.0) * std::pow(cp, 2.0 / p);
      int held = 0;
      for (const auto& f : cosine_ensemble(*g, 100, 4242)) held += poincare_hessian_check(f, p, L).holds;
      ok = ok && held == 100;
      detail += fmt("%dD p=%g %d/100; ", g->dim(), p, held);
    }
  }
  const double est = estimate_poincare_constant(g1, 2.0, 1000).value;
  const bool range = est >= 1.0 / (pi * pi) && est <= 1.6 / (pi * pi);
  detail += fmt("1D p=2 C_P estimate %.6f in [%.6f, %.6f]", est, 1.0 / (pi * pi), 1.6 / (pi * pi));
  return {ok && range, detail};
}

Outcome a11() {
  const Grid g(1.0, 256);
  ConstantsLedger L = ledger_for(g, 2.0, analytic_poincare_constant(g));
  L.K3 = calibrate_gn_constant(g, 2.0, 1000, 7);
  int held = 0;
  int total = 0;
  double worst = 0.0;
  for (const auto& f : cosine_ensemble(g, 100, 90210)) {
    for (double mu : {0.1, 1.0, 10.0}) {
      const InequalityCheck c = gn_interpolation_check(f, 2.0, mu, L);
      held += c.holds;
      ++total;
      if (c.rhs > 0) worst = std::max(worst, c.lhs / c.rhs);
    }
  }
  return {held == total && total == 300,
          fmt("%d/%d hold with calibrated K3 = %.6g (max lhs/rhs %.4f)", held, total, L.K3, worst)};
}

bool invariants_exact(const ConstantsLedger& L) {
  const double p = L.p;
  const double n = L.n;
  return L.delta1 == 1.0 / (32.0 * (1.0 + std::pow(2.0, p)) * L.c1_lem7) &&
         L.lambda == (p + 2.0 - n) / (p - n) && L.lambda > 1.0 &&
         L.kappa == std::min({L.k1 * L.gamma_star / 8.0, L.k1 * L.a / (32.0 * L.delta1),
                              L.k2 * L.D / 8.0, (p + 2.0) * L.a / 8.0}) &&
         L.eta0 == std::pow(L.kappa / (L.c5 * std::pow(L.c6, L.lambda - 1.0)),
                            1.0 / (p * (L.lambda - 1.0)));
}

Outcome a12() {
  bool ok = true;
  int checked = 0;
  for (double p : {2.0, 3.0, 4.0}) {
    for (const Grid& g : {Grid(1.0, 64), Grid(1.0, 1.0, 16, 16)}) {
      if (!(p > g.dim())) continue;
      ok = ok && invariants_exact(ledger_for(g, p, 0.1 * p));
      ++checked;
    }
  }
  auto& sd = small_data();
  if (sd.ok) {
    ok = ok && invariants_exact(sd.r.ledger);
    ++checked;
  }
  const ConstantsLedger w = ledger_for(Grid(1.0, 64), 2.0, 1.0 / (pi * pi));
  const double want = pi * pi / 160.0;
  const bool worked = std::abs(w.delta1 - want) <= 4 * std::numeric_limits<double>::epsilon() * want &&
                      w.lambda == 3.0;
  return {ok && worked && sd.ok,
          fmt("%d ledgers satisfy the invariants exactly; delta1 = %.17g (pi^2/160 = %.17g), lambda = %g",
              checked, w.delta1, want, w.lambda)};
}

Outcome a13() {
  auto& sd = small_data();
  if (!sd.ok) return {false, "run failed: " + sd.error};
  const ScenarioConfig sc = load_scenario_file(kConfigs + "/small_data.cfg");
  run_scenario(sc, (g_out / "small_data_rerun").string());
  const std::string a = slurp(g_out / "small_data" / "monitor.csv");
  const std::string b = slurp(g_out / "small_data_rerun" / "monitor.csv");
  return {!a.empty() && a == b, fmt("monitor.csv %zu bytes, reruns %s", a.size(),
                                    a == b ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_out = argv[1];
  fs::create_directories(g_out);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"A1", a1},   {"A2", a2},   {"A3", a3},   {"A4", a4},   {"A5", a5},
      {"A6", a6},   {"A7", a7},   {"A8", a8},   {"A9", a9},   {"A10", a10},
      {"A11", a11}, {"A12", a12}, {"A13", a13},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
