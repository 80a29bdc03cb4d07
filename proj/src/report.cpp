#include "follow/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace follow {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

constexpr std::size_t kColumns = 19;

std::array<double, kColumns - 1> numeric_fields(const LogRow& r) {
  return {r.t,     r.e_u,   r.e_v,     r.e_v2,    r.h,        r.v_r,      r.omega_r,     r.omega_alpha, r.omega_beta,
          r.alpha, r.beta,  r.robot_x, r.robot_y, r.theta,    r.target_x, r.target_y,    r.score,       r.region_scale};
}

double parse_field(std::string_view s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const TimeSeriesLog& log) {
  out << kCsvHeader << '\n';
  for (const LogRow& r : log) {
    for (double v : numeric_fields(r)) out << format_double(v) << ',';
    out << (r.failure_state ? '1' : '0') << '\n';
  }
}

std::string to_csv(const TimeSeriesLog& log) {
  std::ostringstream out;
  write_csv(out, log);
  return out.str();
}

TimeSeriesLog read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv: missing or unexpected header");
  TimeSeriesLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, kColumns> f{};
    std::size_t col = 0, begin = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (col >= kColumns) throw std::runtime_error("csv line " + std::to_string(line_no) + ": too many fields");
        f[col++] = parse_field(std::string_view(line).substr(begin, i - begin), line_no);
        begin = i + 1;
      }
    }
    if (col != kColumns) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 19 fields");
    LogRow r;
    r.t = f[0];
    r.e_u = f[1];
    r.e_v = f[2];
    r.e_v2 = f[3];
    r.h = f[4];
    r.v_r = f[5];
    r.omega_r = f[6];
    r.omega_alpha = f[7];
    r.omega_beta = f[8];
    r.alpha = f[9];
    r.beta = f[10];
    r.robot_x = f[11];
    r.robot_y = f[12];
    r.theta = f[13];
    r.target_x = f[14];
    r.target_y = f[15];
    r.score = f[16];
    r.region_scale = f[17];
    r.failure_state = f[18] != 0.0;
    log.push_back(r);
  }
  return log;
}

RunSummary summarize(const TimeSeriesLog& log, const SaturationLimits& limits) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  RunSummary s;
  s.rows = log.size();
  s.settling_time_s = {nan, nan, nan};
  s.steady_rms_px = {nan, nan, nan};
  s.mean_abs_h_error_px = nan;
  if (log.empty()) return s;
  s.duration = log.back().t - log.front().t;

  auto channel = [](const LogRow& r, int c) { return c == 0 ? r.e_u : c == 1 ? r.e_v : r.e_v2; };

  for (int c = 0; c < 3; ++c) {
    std::size_t first_settled = log.size();
    for (std::size_t i = log.size(); i-- > 0;) {
      const double e = channel(log[i], c);
      if (!(std::abs(e) < kSettleThresholdPx)) break;
      first_settled = i;
    }
    if (first_settled < log.size()) s.settling_time_s[c] = log[first_settled].t - log.front().t;
  }

  const std::size_t steady_begin = log.size() / 2;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = steady_begin; i < log.size(); ++i) {
      const double e = channel(log[i], c);
      if (std::isfinite(e)) {
        sum += e * e;
        ++n;
      }
    }
    if (n > 0) s.steady_rms_px[c] = std::sqrt(sum / static_cast<double>(n));
  }
  {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = steady_begin; i < log.size(); ++i) {
      if (std::isfinite(log[i].e_v2)) {
        sum += std::abs(log[i].e_v2);
        ++n;
      }
    }
    if (n > 0) s.mean_abs_h_error_px = sum / static_cast<double>(n);
  }

  bool in_failure = false;
  std::size_t started = 0;
  std::size_t saturated = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const LogRow& r = log[i];
    if (r.failure_state && !in_failure) {
      ++s.failure_episodes;
      started = i;
    } else if (!r.failure_state && in_failure) {
      s.reacquisition_latency_ticks.push_back(i - started);
    }
    in_failure = r.failure_state;
    if (std::abs(r.v_r) >= limits.v_max || std::abs(r.omega_r) >= limits.omega_robot_max ||
        std::abs(r.omega_alpha) >= limits.omega_pan_max || std::abs(r.omega_beta) >= limits.omega_tilt_max)
      ++saturated;
  }
  s.saturation_duty_cycle = static_cast<double>(saturated) / static_cast<double>(log.size());
  return s;
}

std::string summary_to_json(const RunSummary& s) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["rows"] = s.rows;
  j["duration_s"] = num(s.duration);
  j["settling_time_s"] = {{"e_u", num(s.settling_time_s[0])},
                          {"e_v", num(s.settling_time_s[1])},
                          {"e_v2", num(s.settling_time_s[2])}};
  j["steady_state_rms_px"] = {{"e_u", num(s.steady_rms_px[0])},
                              {"e_v", num(s.steady_rms_px[1])},
                              {"e_v2", num(s.steady_rms_px[2])}};
  j["mean_abs_h_error_px"] = num(s.mean_abs_h_error_px);
  j["failure_episodes"] = s.failure_episodes;
  j["reacquisition_latency_ticks"] = s.reacquisition_latency_ticks;
  j["saturation_duty_cycle"] = num(s.saturation_duty_cycle);
  return j.dump(2) + "\n";
}

}  // namespace follow
