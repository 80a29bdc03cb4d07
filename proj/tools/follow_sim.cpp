// follow_sim: run a human-following scenario and write the time series and
// summary.
//
//   follow_sim --scenario circle-sim --out runs/circle
//   follow_sim --scenario my_scenario.json --seed 7 --summary-only
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "follow/config.hpp"
#include "follow/report.hpp"
#include "follow/simworld.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monocular pan-tilt human-following simulator"};

  std::string scenario = "circle-sim";
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<double> dt;
  std::optional<std::string> mode;
  bool summary_only = false;

  app.add_option("--scenario", scenario, "Preset (circle-sim, indoor, outdoor) or path to a JSON scenario");
  app.add_option("--out", out_dir, "Output directory for timeseries.csv and summary.json");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--duration", duration, "Simulated seconds");
  app.add_option("--dt", dt, "Control period in seconds");
  app.add_option("--mode", mode, "Interaction terms: as-printed or re-derived");
  app.add_flag("--summary-only", summary_only, "Skip the CSV; print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  follow::ScenarioConfig config;
  try {
    config = follow::load_scenario(scenario);
    if (seed) config.seed = *seed;
    if (duration) config.duration = *duration;
    if (dt) config.dt = *dt;
    if (mode) config.controller.mode = follow::parse_jacobian_mode(*mode);
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const follow::TimeSeriesLog log = follow::run_scenario(config);
    const follow::RunSummary summary = follow::summarize(log, config.controller.limits);
    const std::string summary_json = follow::summary_to_json(summary);

    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      if (!summary_only) write_file(dir / "timeseries.csv", follow::to_csv(log));
      write_file(dir / "summary.json", summary_json);
    }
    if (summary_only || out_dir.empty()) std::cout << summary_json;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
