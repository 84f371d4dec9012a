#include "tvlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <thread>

#include "json.hpp"
#include "tvlab/errors.hpp"

namespace tvlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "grid.dim", "grid.lengths", "grid.cells",
      "model.a", "model.D", "model.p", "model.theta_star",
      "coef.gamma", "coef.Gamma", "coef.f.x", "coef.f.y", "coef.F.x", "coef.F.y",
      "initial.u.constant", "initial.u.cos", "initial.ut.constant", "initial.ut.cos",
      "initial.theta.constant", "initial.theta.cos", "initial.eta_scale",
      "initial.theta_scale",
      "time.t_end", "time.dt_init", "time.cfl_fraction", "time.sample_interval",
      "time.scheme", "time.max_steps",
      "weights.w_u_p", "weights.w_theta_p", "weights.w_u_p2",
      "ledger.C_P", "ledger.K3", "ledger.k1", "ledger.k2", "ledger.K1", "ledger.K2",
      "ledger.A", "ledger.B", "ledger.c5", "ledger.c6", "ledger.theta_radius",
      "ledger.poincare_ensemble", "ledger.gn_ensemble",
      "watchdog.w1p_threshold", "watchdog.theta_inf_threshold",
      "validation.theta_max_check", "output.dir", "seed", "inequalities.ensemble"};
  return keys;
}

[[noreturn]] void key_error(const Config& cfg, const std::string& key, const std::string& msg) {
  std::string where = cfg.source();
  if (cfg.line(key) > 0) where += ":" + std::to_string(cfg.line(key));
  throw ConfigError(where + ": " + key + ": " + msg);
}

Polynomial poly(const Config& cfg, const std::string& key, const char* fallback) {
  try {
    if (!cfg.has(key)) return Polynomial(Config::parse(std::string("k = ") + fallback).get_list("k"));
    return Polynomial(cfg.get_list(key));
  } catch (const DomainError& e) {
    key_error(cfg, key, e.what());
  }
}

Profile profile(const Config& cfg, const std::string& name, int dim) {
  Profile pr;
  pr.constant = cfg.get_double("initial." + name + ".constant", 0.0);
  const std::string key = "initial." + name + ".cos";
  if (!cfg.has(key)) return pr;
  for (const auto& item : cfg.get_string_list(key)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) key_error(cfg, key, "expected 'k:amplitude', got '" + item + "'");
    const std::string wave = item.substr(0, colon);
    CosineMode m;
    try {
      m.amplitude = parse_number(item.substr(colon + 1));
      const auto x = wave.find('x');
      if (x == std::string::npos) {
        m.kx = static_cast<int>(parse_number(wave));
        if (m.kx != parse_number(wave)) throw ConfigError("wavenumbers must be integers");
      } else {
        if (dim != 2) throw ConfigError("'kx x ky' modes need grid.dim = 2");
        m.kx = static_cast<int>(parse_number(wave.substr(0, x)));
        m.ky = static_cast<int>(parse_number(wave.substr(x + 1)));
        if (m.kx != parse_number(wave.substr(0, x)) || m.ky != parse_number(wave.substr(x + 1))) {
          throw ConfigError("wavenumbers must be integers");
        }
      }
    } catch (const ConfigError& e) {
      key_error(cfg, key, e.what());
    }
    if (m.kx < 0 || m.ky < 0) key_error(cfg, key, "wavenumbers must be >= 0");
    pr.modes.push_back(m);
  }
  return pr;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double min_finite(const std::vector<MonitorRow>& rows, double MonitorRow::*col) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (std::isfinite(r.*col)) m = std::min(m, r.*col);
  }
  return m;
}

double max_finite(const std::vector<MonitorRow>& rows, double MonitorRow::*col) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (std::isfinite(r.*col)) m = std::max(m, r.*col);
  }
  return m;
}

}  // namespace

ScalarField Profile::evaluate(const Grid& g, double mode_scale) const {
  ScalarField f(g, constant);
  for (const auto& m : modes) {
    const double wx = m.kx * std::numbers::pi / g.length(0);
    const double wy = g.dim() == 2 ? m.ky * std::numbers::pi / g.length(1) : 0.0;
    for (int j = 0; j < g.cells(1); ++j) {
      const double cy = g.dim() == 2 ? std::cos(wy * g.center(1, j)) : 1.0;
      for (int i = 0; i < g.cells(0); ++i) {
        f[g.index(i, j)] += mode_scale * m.amplitude * std::cos(wx * g.center(0, i)) * cy;
      }
    }
  }
  return f;
}

ScenarioConfig load_scenario(const Config& cfg) {
  for (const auto& k : cfg.keys()) {
    if (!known_keys().count(k)) key_error(cfg, k, "unknown key");
  }
  ScenarioConfig sc;

  const long dim = cfg.get_int("grid.dim", 1);
  if (dim != 1 && dim != 2) key_error(cfg, "grid.dim", "must be 1 or 2");
  std::vector<double> lengths = cfg.has("grid.lengths") ? cfg.get_list("grid.lengths")
                                                        : std::vector<double>(dim, 1.0);
  std::vector<double> cells = cfg.has("grid.cells") ? cfg.get_list("grid.cells")
                                                    : std::vector<double>(dim, 256.0);
  if (lengths.size() == 1 && dim == 2) lengths.push_back(lengths[0]);
  if (cells.size() == 1 && dim == 2) cells.push_back(cells[0]);
  if (static_cast<long>(lengths.size()) != dim) key_error(cfg, "grid.lengths", "need one value per axis");
  if (static_cast<long>(cells.size()) != dim) key_error(cfg, "grid.cells", "need one value per axis");
  for (double c : cells) {
    if (c != std::floor(c) || c < 4 || c > 1e7) key_error(cfg, "grid.cells", "cells must be integers >= 4");
  }
  for (double l : lengths) {
    if (!(l > 0.0)) key_error(cfg, "grid.lengths", "lengths must be > 0");
  }
  sc.grid = dim == 1 ? Grid(lengths[0], static_cast<int>(cells[0]))
                     : Grid(lengths[0], lengths[1], static_cast<int>(cells[0]),
                            static_cast<int>(cells[1]));

  sc.params.a = cfg.get_double("model.a", 1.0);
  sc.params.D = cfg.get_double("model.D", 1.0);
  sc.params.p = cfg.get_double("model.p", 2.0);
  sc.params.theta_star = cfg.get_double("model.theta_star", 0.0);
  sc.params.n = static_cast<int>(dim);
  try {
    sc.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(cfg.source() + ": model: " + e.what());
  }

  if (dim == 1) {
    for (const char* k : {"coef.f.y", "coef.F.y"}) {
      if (cfg.has(k)) key_error(cfg, k, "only valid with grid.dim = 2");
    }
  }
  std::vector<Polynomial> f{poly(cfg, "coef.f.x", "0")};
  std::vector<Polynomial> F{poly(cfg, "coef.F.x", "0")};
  if (dim == 2) {
    f.push_back(poly(cfg, "coef.f.y", "0"));
    F.push_back(poly(cfg, "coef.F.y", "0"));
  }
  sc.spec = CoefficientSpec(poly(cfg, "coef.gamma", "1"), poly(cfg, "coef.Gamma", "0"), f, F);

  sc.u0 = profile(cfg, "u", static_cast<int>(dim));
  sc.ut0 = profile(cfg, "ut", static_cast<int>(dim));
  sc.theta0 = profile(cfg, "theta", static_cast<int>(dim));
  if (!cfg.has("initial.theta.constant")) sc.theta0.constant = sc.params.theta_star;
  sc.eta_scale = cfg.get_double("initial.eta_scale", 1.0);
  sc.theta_scale = cfg.get_double("initial.theta_scale", 1.0);

  StepControl& c = sc.control;
  c.t_end = cfg.get_double("time.t_end");
  c.dt_init = cfg.get_double("time.dt_init", 1e-3);
  c.cfl_fraction = cfg.get_double("time.cfl_fraction", 0.4);
  c.sample_interval = cfg.get_double("time.sample_interval", c.t_end / 100.0);
  c.max_steps = cfg.get_int("time.max_steps", 100000000L);
  try {
    c.scheme = scheme_from_string(cfg.get_string("time.scheme", "imex1"));
  } catch (const ConfigError& e) {
    key_error(cfg, "time.scheme", e.what());
  }
  c.watchdog.w1p_threshold = cfg.get_optional("watchdog.w1p_threshold");
  c.watchdog.theta_inf_threshold = cfg.get_optional("watchdog.theta_inf_threshold");
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(cfg.source() + ": time/watchdog: " + e.what());
  }

  sc.weights.w_u_p = cfg.get_optional("weights.w_u_p");
  sc.weights.w_theta_p = cfg.get_optional("weights.w_theta_p");
  sc.weights.w_u_p2 = cfg.get_optional("weights.w_u_p2");
  for (const char* k : {"weights.w_u_p", "weights.w_theta_p", "weights.w_u_p2"}) {
    if (cfg.has(k) && cfg.get_double(k) < 0.0) key_error(cfg, k, "weights must be >= 0");
  }

  LedgerOverrides& L = sc.ledger;
  L.C_P = cfg.get_optional("ledger.C_P");
  L.K3 = cfg.get_optional("ledger.K3");
  L.k1 = cfg.get_optional("ledger.k1");
  L.k2 = cfg.get_optional("ledger.k2");
  L.K1 = cfg.get_optional("ledger.K1");
  L.K2 = cfg.get_optional("ledger.K2");
  L.A = cfg.get_optional("ledger.A");
  L.B = cfg.get_optional("ledger.B");
  L.c5 = cfg.get_optional("ledger.c5");
  L.c6 = cfg.get_optional("ledger.c6");
  L.theta_radius = cfg.get_optional("ledger.theta_radius");
  for (const char* k : {"ledger.C_P", "ledger.k1", "ledger.k2", "ledger.K1", "ledger.K2",
                        "ledger.A", "ledger.c5", "ledger.c6", "ledger.theta_radius"}) {
    if (cfg.has(k) && !(cfg.get_double(k) > 0.0)) key_error(cfg, k, "must be > 0");
  }
  for (const char* k : {"ledger.K3", "ledger.B"}) {
    if (cfg.has(k) && cfg.get_double(k) < 0.0) key_error(cfg, k, "must be >= 0");
  }
  sc.ledger_options.poincare_ensemble = static_cast<int>(cfg.get_int("ledger.poincare_ensemble", 1000));
  sc.ledger_options.gn_ensemble = static_cast<int>(cfg.get_int("ledger.gn_ensemble", 1000));
  if (sc.ledger_options.poincare_ensemble < 100) key_error(cfg, "ledger.poincare_ensemble", "must be >= 100");
  if (sc.ledger_options.gn_ensemble < 1) key_error(cfg, "ledger.gn_ensemble", "must be >= 1");

  const long seed = cfg.get_int("seed", 1);
  if (seed < 0) key_error(cfg, "seed", "must be >= 0");
  sc.seed = static_cast<std::uint64_t>(seed);
  sc.ledger_options.seed = sc.seed;
  sc.inequality_ensemble = static_cast<int>(cfg.get_int("inequalities.ensemble", 100));
  if (sc.inequality_ensemble < 100) key_error(cfg, "inequalities.ensemble", "must be >= 100");
  sc.output_dir = cfg.get_string("output.dir", "out");

  // Positivity checks cover theta_star + 10 * (initial temperature amplitude).
  const ScalarField th0 = sc.theta0.evaluate(sc.grid, sc.theta_scale);
  double amp = 0.0;
  for (double x : th0.values) amp = std::max(amp, std::abs(x - sc.params.theta_star));
  sc.theta_max_check = cfg.get_double("validation.theta_max_check",
                                      std::max(sc.params.theta_star + 10.0 * amp, 1e-3));
  if (!(sc.theta_max_check > 0.0)) key_error(cfg, "validation.theta_max_check", "must be > 0");

  // Resolved copy: file keys plus every default that was applied.
  sc.resolved = cfg;
  auto fill = [&](const std::string& k, const std::string& v) {
    if (!sc.resolved.has(k)) sc.resolved.set(k, v);
  };
  fill("grid.dim", std::to_string(dim));
  std::string ls, cs;
  for (int a = 0; a < dim; ++a) {
    ls += (a ? ", " : "") + format_number(sc.grid.length(a));
    cs += (a ? ", " : "") + std::to_string(sc.grid.cells(a));
  }
  fill("grid.lengths", ls);
  fill("grid.cells", cs);
  fill("model.a", format_number(sc.params.a));
  fill("model.D", format_number(sc.params.D));
  fill("model.p", format_number(sc.params.p));
  fill("model.theta_star", format_number(sc.params.theta_star));
  fill("coef.gamma", "1");
  fill("coef.Gamma", "0");
  fill("coef.f.x", "0");
  fill("coef.F.x", "0");
  if (dim == 2) {
    fill("coef.f.y", "0");
    fill("coef.F.y", "0");
  }
  fill("initial.theta.constant", format_number(sc.theta0.constant));
  fill("initial.eta_scale", format_number(sc.eta_scale));
  fill("initial.theta_scale", format_number(sc.theta_scale));
  fill("time.dt_init", format_number(c.dt_init));
  fill("time.cfl_fraction", format_number(c.cfl_fraction));
  fill("time.sample_interval", format_number(c.sample_interval));
  fill("time.scheme", to_string(c.scheme));
  fill("time.max_steps", std::to_string(c.max_steps));
  fill("ledger.poincare_ensemble", std::to_string(sc.ledger_options.poincare_ensemble));
  fill("ledger.gn_ensemble", std::to_string(sc.ledger_options.gn_ensemble));
  fill("validation.theta_max_check", format_number(sc.theta_max_check));
  fill("output.dir", sc.output_dir);
  fill("seed", std::to_string(sc.seed));
  fill("inequalities.ensemble", std::to_string(sc.inequality_ensemble));
  return sc;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  return load_scenario(Config::load(path));
}

std::vector<std::string> validate_scenario(const ScenarioConfig& sc) {
  std::vector<std::string> v = validate(sc.spec, sc.theta_max_check, sc.grid.dim());
  const ScalarField th0 = sc.theta0.evaluate(sc.grid, sc.theta_scale);
  if (th0.min() < 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "initial temperature negative (min %g)", th0.min());
    v.emplace_back(buf);
  }
  return v;
}

SimState initial_state(const ScenarioConfig& sc) {
  ScalarField u = sc.u0.evaluate(sc.grid);
  ScalarField ut = sc.ut0.evaluate(sc.grid);
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] *= sc.eta_scale;
    ut[k] *= sc.eta_scale;
  }
  ScalarField v = substitute(u, ut, sc.params.a);
  return SimState(std::move(v), std::move(u), sc.theta0.evaluate(sc.grid, sc.theta_scale), 0.0);
}

InitialReport initial_report(const SimState& s0, const ModelParams& params) {
  InitialReport r;
  for (double x : s0.theta.values) {
    r.theta_deviation = std::max(r.theta_deviation, std::abs(x - params.theta_star));
  }
  r.energy_sum = initial_energy_sum(s0, params.p);
  r.eta = std::pow(r.energy_sum, 1.0 / params.p);
  return r;
}

ConstantsLedger scenario_ledger(const ScenarioConfig& sc, const SimState& s0) {
  return compute_ledger(sc.grid, sc.params, sc.spec,
                        default_theta_radius(s0.theta, sc.params.theta_star), sc.ledger,
                        sc.ledger_options);
}

EnergyWeights scenario_weights(const ScenarioConfig& sc, const ConstantsLedger& ledger) {
  EnergyWeights w = EnergyWeights::from_ledger(ledger);
  if (sc.weights.w_u_p) w.w_u_p = *sc.weights.w_u_p;
  if (sc.weights.w_theta_p) w.w_theta_p = *sc.weights.w_theta_p;
  if (sc.weights.w_u_p2) w.w_u_p2 = *sc.weights.w_u_p2;
  return w;
}

ScenarioResult simulate(const ScenarioConfig& sc) {
  const auto violations = validate_scenario(sc);
  if (!violations.empty()) {
    std::string msg = "validation failed:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  const SimState s0 = initial_state(sc);
  ScenarioResult r;
  r.ledger = scenario_ledger(sc, s0);
  r.weights = scenario_weights(sc, r.ledger);
  r.smallness = smallness_report(sc.spec, sc.params, r.ledger);
  r.initial = initial_report(s0, sc.params);
  r.trajectory = run(s0, sc.spec, sc.params, sc.control, MonitorConfig{r.weights, r.ledger});

  std::vector<double> t, y;
  for (const auto& row : r.trajectory.rows) {
    t.push_back(row.t);
    y.push_back(row.y);
  }
  try {
    r.fit = decay_fit(t, y);
  } catch (const DomainError& e) {
    r.fit_error = e.what();
  }
  for (std::size_t k = 1; k < r.trajectory.rows.size(); ++k) {
    const auto& row = r.trajectory.rows[k];
    const double bound = comparison_bound(row.t, r.initial.eta, r.ledger, sc.params);
    if (bound > 0.0) r.max_bound_ratio = std::max(r.max_bound_ratio, row.y / bound);
  }
  return r;
}

std::string initial_fields_csv(const SimState& s0, double a) {
  const Grid& g = s0.grid();
  const ScalarField ut = recover_ut(s0.v, s0.u, a);
  std::string out = "#schema=v1\n";
  out += g.dim() == 2 ? "x,y,u0,ut0,theta0,v0\n" : "x,u0,ut0,theta0,v0\n";
  char buf[200];
  for (int j = 0; j < g.cells(1); ++j) {
    for (int i = 0; i < g.cells(0); ++i) {
      const std::size_t k = g.index(i, j);
      if (g.dim() == 2) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", g.center(0, i),
                      g.center(1, j), s0.u[k], ut[k], s0.theta[k], s0.v[k]);
      } else {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e\n", g.center(0, i), s0.u[k],
                      ut[k], s0.theta[k], s0.v[k]);
      }
      out += buf;
    }
  }
  return out;
}

std::string summary_json(const ScenarioConfig& sc, const ScenarioResult& r) {
  const Trajectory& tr = r.trajectory;
  json j;
  j["status"] = to_string(tr.status);
  j["message"] = tr.message;
  j["steps"] = tr.steps;
  j["max_steps_reached"] = tr.max_steps_reached;
  j["t_final"] = tr.rows.empty() ? json(nullptr) : num(tr.rows.back().t);
  j["samples"] = tr.rows.size();
  j["scheme"] = to_string(sc.control.scheme);
  j["cg_iterations"] = tr.cg_iterations;
  j["watchdog"] = {{"tripped", tr.status == RunStatus::blowup_suspected},
                   {"w1p_threshold", num(tr.w1p_threshold)},
                   {"theta_inf_threshold", num(tr.theta_inf_threshold)}};
  if (r.fit) {
    j["decay_fit"] = {{"kappa_fit", num(r.fit->kappa_fit)},
                      {"r_squared", num(r.fit->r_squared)},
                      {"window", {num(r.fit->window_start), num(r.fit->window_end)}},
                      {"samples", r.fit->samples}};
  } else {
    j["decay_fit"] = {{"error", r.fit_error}};
  }
  j["kappa_fit"] = r.fit ? num(r.fit->kappa_fit) : json(nullptr);
  j["r_squared"] = r.fit ? num(r.fit->r_squared) : json(nullptr);
  if (!tr.rows.empty()) {
    j["y0"] = num(tr.rows.front().y);
    j["y_final"] = num(tr.rows.back().y);
    j["y_max"] = num(max_finite(tr.rows, &MonitorRow::y));
  }
  j["max_y_over_bound"] = num(r.max_bound_ratio);
  j["residuals"] = {{"odi_min", num(min_finite(tr.rows, &MonitorRow::odi_residual))},
                    {"lemma4_min", num(min_finite(tr.rows, &MonitorRow::lemma4_residual))},
                    {"lemma4b_min", num(min_finite(tr.rows, &MonitorRow::lemma4b_residual))},
                    {"mass_max", num(max_finite(tr.rows, &MonitorRow::mass_residual))},
                    {"theta_min", num(min_finite(tr.rows, &MonitorRow::theta_min))},
                    {"theta_max", num(max_finite(tr.rows, &MonitorRow::theta_max))}};
  j["smallness"] = {{"ratio_a", num(r.smallness.ratio_a)},
                    {"ratio_fF", num(r.smallness.ratio_fF)},
                    {"delta_p", num(r.smallness.delta_p)},
                    {"damping_small", r.smallness.damping_small},
                    {"coupling_small", r.smallness.coupling_small}};
  j["initial"] = {{"theta_deviation_inf", num(r.initial.theta_deviation)},
                  {"energy_sum", num(r.initial.energy_sum)},
                  {"eta", num(r.initial.eta)},
                  {"eta0", num(r.ledger.eta0)},
                  {"eta_below_eta0", r.initial.eta < r.ledger.eta0}};
  j["weights"] = {{"w_u_p", num(r.weights.w_u_p)},
                  {"w_theta_p", num(r.weights.w_theta_p)},
                  {"w_u_p2", num(r.weights.w_u_p2)}};
  return j.dump(2) + "\n";
}

ScenarioResult run_scenario(const ScenarioConfig& sc, const std::string& dir) {
  ScenarioResult r = simulate(sc);
  const fs::path out(dir);
  fs::create_directories(out);
  write_file(out / "monitor.csv", monitor_csv(r.trajectory.rows));
  write_file(out / "ledger.json", ledger_to_json(r.ledger) + "\n");
  write_file(out / "summary.json", summary_json(sc, r));
  write_file(out / "config_resolved.cfg", sc.resolved.dump());
  write_file(out / "initial_fields.csv", initial_fields_csv(initial_state(sc), sc.params.a));
  return r;
}

SweepConfig load_sweep(const Config& cfg, const std::string& base_dir) {
  SweepConfig sw;
  Config base;
  if (cfg.has("sweep.base")) {
    fs::path p(cfg.get_string("sweep.base"));
    if (p.is_relative()) p = fs::path(base_dir) / p;
    base = Config::load(p.string());
  }
  for (const auto& k : cfg.keys()) {
    if (k.rfind("sweep.", 0) == 0) continue;
    base.set(k, cfg.get_string(k));
  }
  for (const auto& k : cfg.keys()) {
    if (k.rfind("sweep.axis.", 0) == 0) {
      SweepAxis ax{k.substr(11), cfg.get_string_list(k)};
      if (!known_keys().count(ax.key)) key_error(cfg, k, "unknown axis key '" + ax.key + "'");
      if (ax.values.empty()) key_error(cfg, k, "axis has no values");
      sw.axes.push_back(std::move(ax));
    } else if (k.rfind("sweep.", 0) == 0 && k != "sweep.base" && k != "sweep.workers" &&
               k != "sweep.max_runs") {
      key_error(cfg, k, "unknown key");
    }
  }
  if (sw.axes.empty()) throw ConfigError(cfg.source() + ": sweep has no axes (sweep.axis.<key>)");
  sw.workers = static_cast<int>(cfg.get_int("sweep.workers", 1));
  if (sw.workers < 1) key_error(cfg, "sweep.workers", "must be >= 1");
  sw.max_runs = cfg.get_int("sweep.max_runs", 1000);
  long total = 1;
  for (const auto& ax : sw.axes) total *= static_cast<long>(ax.values.size());
  if (total > sw.max_runs) {
    throw ConfigError(cfg.source() + ": sweep has " + std::to_string(total) +
                      " runs, above sweep.max_runs = " + std::to_string(sw.max_runs));
  }
  sw.output_dir = base.get_string("output.dir", "sweep_out");
  sw.base = std::move(base);
  return sw;
}

SweepConfig load_sweep_file(const std::string& path) {
  return load_sweep(Config::load(path), fs::path(path).parent_path().string());
}

std::vector<SweepRow> run_sweep(const SweepConfig& sw, const std::string& dir) {
  std::size_t total = 1;
  for (const auto& ax : sw.axes) total *= ax.values.size();
  std::vector<SweepRow> rows(total);
  fs::create_directories(dir);

  auto run_cell = [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    Config cfg = sw.base;
    std::size_t rem = idx;
    row.values.resize(sw.axes.size());
    for (std::size_t a = sw.axes.size(); a-- > 0;) {
      const auto& ax = sw.axes[a];
      row.values[a] = ax.values[rem % ax.values.size()];
      rem /= ax.values.size();
      cfg.set(ax.key, row.values[a]);
    }
    char name[32];
    std::snprintf(name, sizeof name, "cell_%04zu", idx);
    try {
      const ScenarioConfig sc = load_scenario(cfg);
      const ScenarioResult r = run_scenario(sc, (fs::path(dir) / name).string());
      row.status = to_string(r.trajectory.status);
      row.kappa_fit = r.fit ? r.fit->kappa_fit : std::numeric_limits<double>::quiet_NaN();
      row.y0 = r.trajectory.rows.front().y;
      row.y_max = max_finite(r.trajectory.rows, &MonitorRow::y);
      row.watchdog = r.trajectory.status == RunStatus::blowup_suspected;
      row.message = r.trajectory.message;
    } catch (const std::exception& e) {
      row.status = "invalid";
      row.kappa_fit = row.y0 = row.y_max = std::numeric_limits<double>::quiet_NaN();
      row.message = e.what();
    }
  };

  const int workers = std::max(1, std::min<int>(sw.workers, static_cast<int>(total)));
  if (workers == 1) {
    for (std::size_t k = 0; k < total; ++k) run_cell(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < total; k = next++) run_cell(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  write_file(fs::path(dir) / "sweep.csv", sweep_csv(sw, rows));
  return rows;
}

std::string sweep_csv(const SweepConfig& sw, const std::vector<SweepRow>& rows) {
  std::string out = "#schema=v1\ncell";
  for (const auto& ax : sw.axes) out += "," + ax.key;
  out += ",status,kappa_fit,y0,y_max,watchdog,message\n";
  char buf[40];
  auto fmt = [&](double x) -> std::string {
    if (std::isnan(x)) return "nan";
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
  };
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out += std::to_string(k);
    for (const auto& v : r.values) out += "," + v;
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), '"', '\'');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out += "," + r.status + "," + fmt(r.kappa_fit) + "," + fmt(r.y0) + "," + fmt(r.y_max) + "," +
           (r.watchdog ? "1" : "0") + ",\"" + msg + "\"\n";
  }
  return out;
}

std::string constants_report(const ScenarioConfig& sc) {
  const SimState s0 = initial_state(sc);
  const ConstantsLedger L = scenario_ledger(sc, s0);
  const SmallnessReport s = smallness_report(sc.spec, sc.params, L);
  json j;
  j["ledger"] = json::parse(ledger_to_json(L));
  j["smallness"] = {{"ratio_a", num(s.ratio_a)},
                    {"ratio_fF", num(s.ratio_fF)},
                    {"delta_p", num(s.delta_p)},
                    {"damping_small", s.damping_small},
                    {"coupling_small", s.coupling_small}};
  const InitialReport ir = initial_report(s0, sc.params);
  j["initial"] = {{"theta_deviation_inf", num(ir.theta_deviation)},
                  {"energy_sum", num(ir.energy_sum)},
                  {"eta", num(ir.eta)}};
  return j.dump(2) + "\n";
}

std::string inequality_report(const ScenarioConfig& sc) {
  const SimState s0 = initial_state(sc);
  const ConstantsLedger L = scenario_ledger(sc, s0);
  const double p = sc.params.p;
  const int count = sc.inequality_ensemble;
  const PoincareEstimate est = estimate_poincare_constant(sc.grid, p, count, sc.seed);

  // A fresh ensemble, disjoint from the calibration seeds.
  const auto fields = cosine_ensemble(sc.grid, count, sc.seed + 1000);
  int ph_held = 0;
  double ph_worst = 0.0;
  for (const auto& f : fields) {
    const InequalityCheck c = poincare_hessian_check(f, p, L);
    ph_held += c.holds;
    if (c.rhs > 0.0) ph_worst = std::max(ph_worst, c.lhs / c.rhs);
  }
  json gn = json::array();
  for (double mu : {0.1, 1.0, 10.0}) {
    int held = 0;
    double worst = 0.0;
    for (const auto& f : fields) {
      const InequalityCheck c = gn_interpolation_check(f, p, mu, L);
      held += c.holds;
      if (c.rhs > 0.0) worst = std::max(worst, c.lhs / c.rhs);
    }
    gn.push_back({{"mu", mu}, {"held", held}, {"total", count}, {"max_lhs_over_rhs", num(worst)}});
  }
  json j;
  j["p"] = p;
  j["n"] = sc.grid.dim();
  j["poincare_constant"] = {{"ensemble_estimate", num(est.value)},
                            {"max_ratio", num(est.max_ratio)},
                            {"analytic_p2", num(analytic_poincare_constant(sc.grid))},
                            {"ledger_value", num(L.C_P)},
                            {"ledger_provenance", to_string(L.provenance.at("C_P"))}};
  j["poincare_hessian"] = {{"held", ph_held},
                           {"total", count},
                           {"max_lhs_over_rhs", num(ph_worst)},
                           {"c1_lem7", num(L.c1_lem7)}};
  j["gn_interpolation"] = gn;
  j["K3"] = {{"value", num(L.K3)}, {"provenance", to_string(L.provenance.at("K3"))}};
  return j.dump(2) + "\n";
}

}  // namespace tvlab
