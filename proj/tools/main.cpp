// Command-line front end: parse a config, run the exploration simulation,
// export CSV/PGM artifacts and a reproducible manifest.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ergosim/config.hpp>
#include <ergosim/io.hpp>
#include <ergosim/sim.hpp>
#include <ergosim/version.hpp>

namespace
{
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

struct RunOptions
{
  std::string config_path;
  std::string out_dir;
  std::int64_t max_steps = -1;
  std::vector<int> grid;
  std::vector<std::string> overrides;
};

ergosim::SimConfig load_config(const RunOptions& opt)
{
  ergosim::SimConfig config = ergosim::parse_config_file(opt.config_path);
  if (opt.max_steps >= 0)
  {
    config.max_steps = opt.max_steps;
  }
  if (!opt.grid.empty())
  {
    config.grid.nx = opt.grid[0];
    config.grid.ny = opt.grid[1];
  }
  for (const std::string& assignment : opt.overrides)
  {
    ergosim::apply_override(config, assignment);
  }
  const auto issues = config.validate();
  if (!issues.empty())
  {
    throw ergosim::ValidationError(issues);
  }
  return config;
}

int do_run(const RunOptions& opt)
{
  ergosim::SimConfig config;
  try
  {
    config = load_config(opt);
  }
  catch (const ergosim::ValidationError& e)
  {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }

  ergosim::SimTrace trace;
  double wall_seconds = 0.0;
  try
  {
    const auto t0 = std::chrono::steady_clock::now();
    trace = ergosim::run(config);
    wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  }
  catch (const std::exception& e)
  {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }

  try
  {
    namespace fs = std::filesystem;
    const fs::path out(opt.out_dir);
    fs::create_directories(out);

    std::vector<std::string> artifacts;
    auto emit = [&artifacts](const std::string& p) {
      artifacts.push_back(p);
      return p;
    };
    ergosim::write_metrics_csv(emit((out / "metrics.csv").string()), trace);
    ergosim::write_trajectory_csv(emit((out / "trajectory.csv").string()), trace);
    ergosim::write_events_csv(emit((out / "events.csv").string()), trace);
    for (const ergosim::Snapshot& snap : trace.snapshots)
    {
      const std::string stem = "phi_k" + std::to_string(snap.k);
      ergosim::write_pgm16(emit((out / (stem + ".pgm")).string()), snap.phi);
      ergosim::write_field_csv(emit((out / (stem + ".csv")).string()), snap.phi);
    }
    ergosim::write_manifest((out / "manifest.toml").string(), config, trace,
                            artifacts, wall_seconds);

    for (const std::string& w : trace.warnings)
    {
      std::cerr << "warning: " << w << "\n";
    }
    std::cout << "steps:           " << config.max_steps << "\n"
              << "initial V:       " << ergosim::format_double(trace.initial_V) << "\n"
              << "final V:         " << ergosim::format_double(trace.final_V) << "\n"
              << "cycles:          " << trace.cycles_completed << "\n"
              << "wall time [s]:   " << wall_seconds << "\n"
              << "artifacts:       " << opt.out_dir << "\n";
  }
  catch (const std::exception& e)
  {
    std::cerr << "output failed: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}

int do_validate(const RunOptions& opt)
{
  try
  {
    const ergosim::SimConfig config = load_config(opt);
    std::cout << "OK: " << opt.config_path << " ("
              << config.holes.size() << " holes, grid " << config.grid.nx << "x"
              << config.grid.ny << ", max_steps " << config.max_steps << ")\n";
    return 0;
  }
  catch (const ergosim::ValidationError& e)
  {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
}
}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Deterministic ergodic exploration simulator" };
  app.require_subcommand(1);

  RunOptions opt;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a simulation and export artifacts");
  run_cmd->add_option("--config", opt.config_path, "Configuration file")->required();
  run_cmd->add_option("--out", opt.out_dir, "Output directory")->required();
  run_cmd->add_option("--max-steps", opt.max_steps, "Override run.max_steps");
  run_cmd->add_option("--grid", opt.grid, "Override grid.nx and grid.ny")
      ->expected(2);
  run_cmd->add_option("--set", opt.overrides,
                      "Override any config key, e.g. --set robot.v_max=5");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Parse and validate a configuration");
  validate_cmd->add_option("--config", opt.config_path, "Configuration file")
      ->required();

  CLI::App* version_cmd = app.add_subcommand("version", "Print the version");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    // Keep usage errors inside the documented code space: 0 for --help,
    // 1 for anything malformed.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (run_cmd->parsed())
  {
    return do_run(opt);
  }
  if (validate_cmd->parsed())
  {
    return do_validate(opt);
  }
  if (version_cmd->parsed())
  {
    std::cout << "ergosim " << ergosim::kVersion << "\n";
    return 0;
  }
  return kExitValidation;
}
