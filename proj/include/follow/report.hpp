#ifndef FOLLOW_REPORT_HPP
#define FOLLOW_REPORT_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "follow/controller.hpp"
#include "follow/simworld.hpp"

namespace follow {

inline constexpr std::string_view kCsvHeader =
    "t,e_u,e_v,e_v2,h,V_r,omega_r,omega_alpha,omega_beta,alpha,beta,robot_x,robot_y,theta,target_x,target_y,"
    "score,region_scale,failure_state";

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

void write_csv(std::ostream& out, const TimeSeriesLog& log);
std::string to_csv(const TimeSeriesLog& log);

/// Inverse of write_csv; throws std::runtime_error on a malformed file.
TimeSeriesLog read_csv(std::istream& in);

struct RunSummary {
  std::size_t rows = 0;
  double duration = 0.0;
  // Per channel e_u, e_v, e_v2. NaN when the channel never settles.
  std::array<double, 3> settling_time_s{};
  std::array<double, 3> steady_rms_px{};  // over the final 50% of rows
  double mean_abs_h_error_px = 0.0;       // |h - H| = |e_v2|, final 50%
  std::size_t failure_episodes = 0;
  std::vector<std::size_t> reacquisition_latency_ticks;  // completed episodes only
  double saturation_duty_cycle = 0.0;
};

inline constexpr double kSettleThresholdPx = 5.0;

/// Depends only on the log rows and the saturation bounds.
RunSummary summarize(const TimeSeriesLog& log, const SaturationLimits& limits);

/// JSON object; NaN fields are written as null.
std::string summary_to_json(const RunSummary& summary);

}  // namespace follow

#endif  // FOLLOW_REPORT_HPP
