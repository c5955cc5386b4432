// idrem: run scenarios, reproduce the two reference experiments, check
// excitation and audit error bounds.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "idrem/bounds.hpp"
#include "idrem/config.hpp"
#include "idrem/excitation.hpp"
#include "idrem/harness.hpp"

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

void summarize(const idrem::RunResult& run, double seconds) {
  const auto& s = run.scenario;
  std::int64_t drem = 0;
  double err_max_late = 0.0;
  for (const auto& r : run.steps) {
    if (r.branch == idrem::Branch::Drem) ++drem;
    if (r.t >= 2.0) err_max_late = std::max(err_max_late, r.err_inst);
  }
  const double err_final = run.steps.empty() ? 0.0 : run.steps.back().err_inst;
  fmt::print("run.steps = {}\n", run.steps.size());
  fmt::print("run.rows = {}\n", run.trace.rows.size());
  fmt::print("run.intervals = {}\n", run.intervals.size());
  fmt::print("run.drem_fraction = {:.6f}\n",
             run.steps.empty() ? 0.0 : static_cast<double>(drem) / static_cast<double>(run.steps.size()));
  fmt::print("run.err_max_after_2s = {:.6g}\n", err_max_late);
  fmt::print("run.err_final = {:.6g}\n", err_final);
  fmt::print("run.t_e_err_window = {:.6g}\n", idrem::steady_state_error(run, std::max(0.0, s.t_e - 2.0), s.t_e));
  fmt::print("run.seconds = {:.3f}\n", seconds);
}

std::vector<double> split_values(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw idrem::ConfigError(fmt::format("--values: bad number '{}'", item));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

idrem::RunResult timed_run(const idrem::Scenario& s, const idrem::RunOptions& opts, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  idrem::RunResult run = idrem::run_scenario(s, opts);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying parameter identification with interval DREM"};
  app.require_subcommand(1);

  std::string config, out, experiment, param = "T", values;
  std::uint64_t seed = 0;
  std::int64_t stride = 10;
  double ts = 0.1;

  auto* run_cmd = app.add_subcommand("run", "simulate a scenario from a config file");
  run_cmd->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the noise seed");
  run_cmd->add_option("--out", out, "trace CSV");
  run_cmd->add_option("--log-stride", stride, "log every K-th step")->check(CLI::PositiveNumber);

  auto* repro_cmd = app.add_subcommand("repro", "rerun a reference experiment");
  repro_cmd->add_option("--experiment", experiment, "1 (noise-free) or 2 (uniform noise)")
      ->required()
      ->check(CLI::IsMember({"1", "2"}));
  repro_cmd->add_option("--out", out, "trace CSV");
  repro_cmd->add_option("--log-stride", stride, "log every K-th step")->check(CLI::PositiveNumber);

  auto* exc_cmd = app.add_subcommand("excitation", "finite-excitation levels of the regressor");
  exc_cmd->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
  exc_cmd->add_option("--ts", ts, "window length")->required()->check(CLI::PositiveNumber);

  auto* bounds_cmd = app.add_subcommand("bounds", "simulate, then audit the error bounds");
  bounds_cmd->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
  bounds_cmd->add_option("--ts", ts, "excitation window length (default 0.1)")->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "steady-state error across a parameter");
  sweep_cmd->add_option("--param", param, "T or gamma0")->required()->check(CLI::IsMember({"T", "gamma0"}));
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();
  sweep_cmd->add_option("--config", config, "base scenario (default: experiment 1)")->check(CLI::ExistingFile);
  bool serial = false;
  sweep_cmd->add_flag("--serial", serial, "run points one after another");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run_cmd || *repro_cmd) {
      idrem::Scenario s = *run_cmd ? idrem::load_config(config) : idrem::preset(experiment == "1" ? "exp1" : "exp2");
      if (*seed_opt) s.seed = seed;
      idrem::RunOptions opts;
      opts.log_stride = stride;
      double seconds = 0.0;
      const idrem::RunResult run = timed_run(s, opts, seconds);
      if (!out.empty()) idrem::write_csv(run.trace, out);
      summarize(run, seconds);
    } else if (*exc_cmd) {
      const idrem::Scenario s = idrem::load_config(config);
      const idrem::ExcitationReport rep = idrem::excitation_report(s, s.grid.t_r_plus, s.t_e, ts);
      std::cout << idrem::format_excitation(rep);
      if (s.t_end - s.t_e >= ts) {
        std::cout << idrem::format_excitation(idrem::excitation_report(s, s.t_e, s.t_end, ts), "after_te");
      }
    } else if (*bounds_cmd) {
      const idrem::Scenario s = idrem::load_config(config);
      double seconds = 0.0;
      const idrem::RunResult run = timed_run(s, {}, seconds);
      std::cout << idrem::format_bounds(idrem::audit_run(run, ts));
    } else if (*sweep_cmd) {
      const idrem::Scenario base = config.empty() ? idrem::preset("exp1") : idrem::load_config(config);
      const auto p = param == "T" ? idrem::SweepParam::T : idrem::SweepParam::Gamma0;
      std::cout << idrem::format_sweep(p, idrem::sweep(base, p, split_values(values), !serial));
    }
  } catch (const idrem::ConfigError& e) {
    std::fprintf(stderr, "idrem: configuration error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "idrem: error: %s\n", e.what());
    return kRuntimeError;
  }
  return 0;
}
