// tvlab: run scenarios, sweeps and constant/inequality reports.
//
// Exit codes: 0 success, 1 configuration or validation error, 2 run failure.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tvlab/errors.hpp"
#include "tvlab/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRunFailed = 2;

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return kOk;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return kRunFailed;
  }
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  return kOk;
}

int cmd_run(const std::string& cfg_path, const std::string& out_override) {
  tvlab::ScenarioConfig sc;
  try {
    sc = tvlab::load_scenario_file(cfg_path);
  } catch (const tvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  const auto violations = tvlab::validate_scenario(sc);
  if (!violations.empty()) {
    std::cerr << "error: validation failed\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return kInvalid;
  }
  const std::string dir = out_override.empty() ? sc.output_dir : out_override;
  try {
    const auto r = tvlab::run_scenario(sc, dir);
    const auto& tr = r.trajectory;
    std::cout << "status: " << tvlab::to_string(tr.status) << "\n"
              << "steps: " << tr.steps << "\n"
              << "samples: " << tr.rows.size() << "\n";
    if (r.fit) std::cout << "kappa_fit: " << r.fit->kappa_fit << " (r^2 " << r.fit->r_squared << ")\n";
    if (!tr.message.empty()) std::cout << "message: " << tr.message << "\n";
    std::cout << "output: " << dir << "\n";
    return tr.status == tvlab::RunStatus::completed ? kOk : kRunFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailed;
  }
}

int cmd_sweep(const std::string& cfg_path, const std::string& out_override, int workers) {
  tvlab::SweepConfig sw;
  try {
    sw = tvlab::load_sweep_file(cfg_path);
    // Validate the base once so that a broken base fails fast.
    tvlab::load_scenario(sw.base);
  } catch (const tvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  if (workers > 0) sw.workers = workers;
  const std::string dir = out_override.empty() ? sw.output_dir : out_override;
  try {
    const auto rows = tvlab::run_sweep(sw, dir);
    int failed = 0;
    for (const auto& r : rows) failed += r.status != "completed";
    std::cout << "cells: " << rows.size() << ", not completed: " << failed << "\n"
              << "table: " << dir << "/sweep.csv\n";
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailed;
  }
}

template <class Fn>
int cmd_report(const std::string& cfg_path, const std::string& out, Fn&& report) {
  tvlab::ScenarioConfig sc;
  try {
    sc = tvlab::load_scenario_file(cfg_path);
    const auto violations = tvlab::validate_scenario(sc);
    if (!violations.empty()) {
      std::cerr << "error: validation failed\n";
      for (const auto& v : violations) std::cerr << "  " << v << "\n";
      return kInvalid;
    }
  } catch (const tvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  try {
    return emit(report(sc), out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tvlab - thermoviscoelastic decay laboratory"};
  app.require_subcommand(1);

  std::string cfg;
  std::string out;
  int workers = 0;

  auto* run = app.add_subcommand("run", "Run one scenario and write its outputs");
  run->add_option("config", cfg, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out, "Output directory (overrides output.dir)");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("config", cfg, "Sweep config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", out, "Output directory (overrides output.dir)");
  sweep->add_option("-j,--workers", workers, "Worker threads (overrides sweep.workers)")
      ->check(CLI::PositiveNumber);

  auto* constants = app.add_subcommand("constants", "Print the constants ledger as JSON");
  constants->add_option("config", cfg, "Scenario config file")->required()->check(CLI::ExistingFile);
  constants->add_option("-o,--out", out, "Write to file instead of stdout");

  auto* check = app.add_subcommand("check-inequalities", "Ensemble inequality report as JSON");
  check->add_option("config", cfg, "Scenario config file")->required()->check(CLI::ExistingFile);
  check->add_option("-o,--out", out, "Write to file instead of stdout");

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  if (*run) return cmd_run(cfg, out);
  if (*sweep) return cmd_sweep(cfg, out, workers);
  if (*constants) return cmd_report(cfg, out, tvlab::constants_report);
  if (*check) return cmd_report(cfg, out, tvlab::inequality_report);
  std::cout << "tvlab " << TVLAB_VERSION << "\n";
  return kOk;
}
