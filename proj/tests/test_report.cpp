#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "follow/config.hpp"
#include "follow/report.hpp"

namespace follow {
namespace {

TEST(Presets, CircleSim) {
  const ScenarioConfig c = preset("circle-sim");
  EXPECT_EQ(c.controller.gains.desired_half_height, 100.0);
  EXPECT_EQ(c.trajectory.kind, TrajectoryKind::kCircle);
  EXPECT_EQ(c.trajectory.center.x, 0.5);
  EXPECT_EQ(c.trajectory.center.y, 0.5);
  EXPECT_EQ(c.trajectory.radius, 0.4);
  EXPECT_EQ(c.initial.robot.x, 0.0);
  EXPECT_EQ(c.initial.robot.y, 0.0);
  EXPECT_EQ(c.dt, 0.02);
}

TEST(Presets, IndoorOutdoor) {
  const ScenarioConfig in = preset("indoor");
  EXPECT_EQ(in.controller.gains.lambda1, 5.0);
  EXPECT_EQ(in.controller.gains.lambda2, 0.91);
  EXPECT_EQ(in.controller.gains.desired_half_height, 500.0);
  const ScenarioConfig out = preset("outdoor");
  EXPECT_EQ(out.controller.gains.desired_half_height, 300.0);
  EXPECT_EQ(out.controller.gains.lambda1, 5.0);
  EXPECT_EQ(out.controller.gains.lambda2, 0.91);
  EXPECT_THROW(preset("lab"), ConfigError);
}

std::string error_of(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(ParseConfig, OverlaysPresetSections) {
  const ScenarioConfig c =
      parse_config_text(R"({"preset": "circle-sim", "gains": {"k1": 1.5}, "noise": {"sigma_px": 2,
                            "occlusion_windows": [[3, 5]]}, "controller": {"mode": "as-printed"}, "seed": 9})");
  EXPECT_EQ(c.controller.gains.k1, 1.5);
  EXPECT_EQ(c.controller.gains.k2, 0.5);
  EXPECT_EQ(c.controller.gains.desired_half_height, 100.0);
  EXPECT_EQ(c.perception.noise.sigma_px, 2.0);
  ASSERT_EQ(c.perception.noise.occlusion_windows.size(), 1u);
  EXPECT_EQ(c.perception.noise.occlusion_windows[0].t_end, 5.0);
  EXPECT_EQ(c.controller.mode, JacobianMode::kAsPrinted);
  EXPECT_EQ(c.seed, 9u);
}

TEST(ParseConfig, ErrorsNameTheField) {
  EXPECT_NE(error_of(R"({"dt": 0})").find("dt"), std::string::npos);
  EXPECT_NE(error_of(R"({"gains": {"k4": 1}})").find("/gains/k4"), std::string::npos);
  EXPECT_NE(error_of(R"({"gian": {}})").find("/gian"), std::string::npos);
  EXPECT_NE(error_of(R"({"gains": {"k1": "fast"}})").find("/gains/k1"), std::string::npos);
  EXPECT_NE(error_of(R"({"trajectory": {"kind": "spiral"}})").find("/trajectory/kind"), std::string::npos);
  EXPECT_NE(error_of(R"({"gains": {"k2": -1}})").find("k2"), std::string::npos);
  EXPECT_NE(error_of(R"({"recovery": {"th_low": 0.9}})").find("th_low"), std::string::npos);
  EXPECT_NE(error_of("{not json").find("malformed"), std::string::npos);
}

TEST(ParseConfig, MissingFile) {
  EXPECT_THROW(parse_config("/nonexistent/scenario.json"), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST(ParseConfig, ReadsFileAndPresetNames) {
  const auto path = std::filesystem::temp_directory_path() / "follow_test_scenario.json";
  {
    std::ofstream out(path);
    out << R"({"preset": "indoor", "duration": 3.5})";
  }
  EXPECT_EQ(load_scenario(path.string()).duration, 3.5);
  EXPECT_EQ(load_scenario("outdoor").controller.gains.desired_half_height, 300.0);
  std::filesystem::remove(path);
}

TEST(Csv, ShortestRoundTripFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(100.0), "100");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Csv, RandomLogsRoundTripBitExactly) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> val(-1e3, 1e3);
  std::uniform_int_distribution<int> coin(0, 9);
  TimeSeriesLog log;
  for (int i = 0; i < 300; ++i) {
    LogRow r;
    r.t = 0.02 * i;
    r.e_u = coin(rng) == 0 ? std::numeric_limits<double>::quiet_NaN() : val(rng);
    r.e_v = val(rng) * 1e-7;
    r.e_v2 = val(rng);
    r.h = val(rng);
    r.v_r = val(rng);
    r.omega_alpha = val(rng) * 1e-300;
    r.theta = val(rng);
    r.failure_state = coin(rng) < 3;
    log.push_back(r);
  }
  const std::string text = to_csv(log);
  std::istringstream in(text);
  const TimeSeriesLog back = read_csv(in);
  ASSERT_EQ(back.size(), log.size());
  EXPECT_EQ(to_csv(back), text);
  for (std::size_t i = 0; i < log.size(); ++i) {
    ASSERT_EQ(back[i].e_v2, log[i].e_v2);
    ASSERT_EQ(back[i].omega_alpha, log[i].omega_alpha);
    ASSERT_EQ(back[i].failure_state, log[i].failure_state);
  }
}

TEST(Csv, HeaderOnlyForEmptyLogAndRejectsGarbage) {
  EXPECT_EQ(to_csv({}), std::string(kCsvHeader) + "\n");
  std::istringstream bad_header("t,e_u\n");
  EXPECT_THROW(read_csv(bad_header), std::runtime_error);
  std::istringstream bad_row(std::string(kCsvHeader) + "\n1,2,3\n");
  EXPECT_THROW(read_csv(bad_row), std::runtime_error);
}

TEST(Summarize, ZeroErrorLog) {
  TimeSeriesLog log(100);
  for (std::size_t i = 0; i < log.size(); ++i) log[i].t = 0.02 * i;
  const RunSummary s = summarize(log, SaturationLimits{});
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(s.settling_time_s[c], 0.0);
    EXPECT_EQ(s.steady_rms_px[c], 0.0);
  }
  EXPECT_EQ(s.mean_abs_h_error_px, 0.0);
  EXPECT_EQ(s.failure_episodes, 0u);
  EXPECT_EQ(s.saturation_duty_cycle, 0.0);
}

TEST(Summarize, EmptyLogIsNanMarked) {
  const RunSummary s = summarize({}, SaturationLimits{});
  EXPECT_EQ(s.rows, 0u);
  EXPECT_TRUE(std::isnan(s.settling_time_s[0]));
  EXPECT_TRUE(std::isnan(s.mean_abs_h_error_px));
  EXPECT_NE(summary_to_json(s).find("null"), std::string::npos);
}

TEST(Summarize, SettlingEpisodesAndSaturation) {
  TimeSeriesLog log(10);
  for (std::size_t i = 0; i < log.size(); ++i) {
    log[i].t = 0.5 * i;
    log[i].e_u = i < 4 ? 20.0 : 1.0;
    log[i].failure_state = i >= 2 && i < 5;
  }
  log[1].v_r = -1.2;
  const RunSummary s = summarize(log, SaturationLimits{});
  EXPECT_EQ(s.settling_time_s[0], 2.0);
  EXPECT_EQ(s.failure_episodes, 1u);
  ASSERT_EQ(s.reacquisition_latency_ticks.size(), 1u);
  EXPECT_EQ(s.reacquisition_latency_ticks[0], 3u);
  EXPECT_DOUBLE_EQ(s.saturation_duty_cycle, 0.1);
  EXPECT_DOUBLE_EQ(s.steady_rms_px[0], 1.0);
}

TEST(Summarize, OcclusionRunCountsOneEpisode) {
  ScenarioConfig c = preset("circle-sim");
  c.duration = 20.0;
  c.perception.noise.occlusion_windows = {{8.0, 9.0}};
  const RunSummary s = summarize(run_scenario(c), c.controller.limits);
  EXPECT_EQ(s.failure_episodes, 1u);
}

TEST(Summarize, RecomputingFromCsvMatchesInMemory) {
  ScenarioConfig c = preset("outdoor");
  c.duration = 15.0;
  const TimeSeriesLog log = run_scenario(c);
  std::istringstream in(to_csv(log));
  EXPECT_EQ(summary_to_json(summarize(read_csv(in), c.controller.limits)),
            summary_to_json(summarize(log, c.controller.limits)));
}

}  // namespace
}  // namespace follow
