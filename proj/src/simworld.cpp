#include "follow/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace follow {

void TargetTrajectory::validate() const {
  switch (kind) {
    case TrajectoryKind::kCircle:
      if (!(radius > 0.0)) throw DomainError("trajectory.radius must be > 0");
      break;
    case TrajectoryKind::kLine:
      break;
    case TrajectoryKind::kWaypoints:
      if (waypoints.empty()) throw DomainError("trajectory.waypoints must not be empty");
      if (!(speed >= 0.0)) throw DomainError("trajectory.speed must be >= 0");
      break;
  }
}

Point2 target_position(double t, const TargetTrajectory& traj) {
  switch (traj.kind) {
    case TrajectoryKind::kCircle: {
      const double a = traj.rate * t + traj.phase;
      return {traj.center.x - traj.radius * std::cos(a), traj.center.y - traj.radius * std::sin(a)};
    }
    case TrajectoryKind::kLine: {
      const double s = t + traj.phase;
      return {traj.start.x + traj.velocity.x * s, traj.start.y + traj.velocity.y * s};
    }
    case TrajectoryKind::kWaypoints: {
      double remaining = std::max(0.0, (t + traj.phase) * traj.speed);
      for (std::size_t i = 0; i + 1 < traj.waypoints.size(); ++i) {
        const Point2& a = traj.waypoints[i];
        const Point2& b = traj.waypoints[i + 1];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        if (remaining <= len && len > 0.0) {
          const double f = remaining / len;
          return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
        }
        remaining -= len;
      }
      return traj.waypoints.back();
    }
  }
  return {};
}

void BodyModel::validate() const {
  if (!(camera_height > 0.0)) throw DomainError("body.camera_height must be > 0");
  if (!(camera_height < head_height)) throw DomainError("body.head_height must exceed body.camera_height");
  if (std::abs(body_center_height - head_height / 2.0) > 1e-9)
    throw DomainError("body.body_center_height must equal body.head_height / 2");
  if (body_center_height == camera_height)
    throw DomainError("body.body_center_height must differ from body.camera_height");
}

double BodyModel::lambda1() const { return 1.0 / std::abs(body_center_height - camera_height); }
double BodyModel::lambda2() const { return 1.0 / std::abs(head_height - camera_height); }

namespace {

PanTiltAngles advance_joints(PanTiltAngles a, const ControlCommand& cmd, double dt, const JointLimits& limits) {
  a.alpha = std::clamp(a.alpha + cmd.omega_alpha * dt, -limits.alpha_max, limits.alpha_max);
  a.beta = std::clamp(a.beta + cmd.omega_beta * dt, -limits.beta_max, limits.beta_max);
  return a;
}

}  // namespace

SimState integrate(const SimState& state, const ControlCommand& cmd, double dt, const JointLimits& limits) {
  SimState next = state;
  next.robot.x += cmd.v_r * std::cos(state.robot.theta) * dt;
  next.robot.y += cmd.v_r * std::sin(state.robot.theta) * dt;
  next.robot.theta = wrap_angle(state.robot.theta + cmd.omega_r * dt);
  next.angles = advance_joints(state.angles, cmd, dt, limits);
  next.t = state.t + dt;
  return next;
}

SimState integrate_exact(const SimState& state, const ControlCommand& cmd, double dt, const JointLimits& limits) {
  SimState next = state;
  const double th = state.robot.theta;
  const double dth = cmd.omega_r * dt;
  if (std::abs(dth) < 1e-12) {
    next.robot.x += cmd.v_r * std::cos(th) * dt;
    next.robot.y += cmd.v_r * std::sin(th) * dt;
  } else {
    const double radius = cmd.v_r / cmd.omega_r;
    next.robot.x += radius * (std::sin(th + dth) - std::sin(th));
    next.robot.y += radius * (std::cos(th) - std::cos(th + dth));
  }
  next.robot.theta = wrap_angle(th + dth);
  next.angles = advance_joints(state.angles, cmd, dt, limits);
  next.t = state.t + dt;
  return next;
}

std::optional<RenderedTarget> render_measurement(const SimState& state, const BodyModel& body,
                                                 const CameraIntrinsics& k, const JointLimits& limits) {
  RenderedTarget r;
  r.body_center = world_to_camera(state.robot, body.camera_height, state.angles,
                                  {state.target.x, state.target.y, body.body_center_height}, limits);
  r.head_top = world_to_camera(state.robot, body.camera_height, state.angles,
                               {state.target.x, state.target.y, body.head_height}, limits);
  if (!(r.body_center.z > 0.0) || !(r.head_top.z > 0.0)) return std::nullopt;
  const Pixel center = project(r.body_center, k);
  const Pixel top = project(r.head_top, k);
  r.box = {center.u, center.v, top.v, 1.0};
  r.head_u = top.u;
  r.visible = center.u >= 0.0 && center.u < k.width && center.v >= 0.0 && center.v < k.height && r.box.valid();
  return r;
}

void ScenarioConfig::validate() const {
  intrinsics.validate();
  if (!(joint_limits.alpha_max > 0.0)) throw DomainError("joint_limits.alpha_max must be > 0");
  if (!(joint_limits.beta_max > 0.0 && joint_limits.beta_max < kPi / 2.0))
    throw DomainError("joint_limits.beta_max must lie in (0, pi/2)");
  body.validate();
  controller.gains.validate();
  controller.limits.validate();
  if (!(controller.hold_decay >= 0.0 && controller.hold_decay <= 1.0))
    throw DomainError("controller.hold_decay must lie in [0, 1]");
  trajectory.validate();
  perception.noise.validate();
  perception.recovery.validate();
  if (!(perception.gate_tolerance_px > 0.0)) throw DomainError("perception.gate_tolerance_px must be > 0");
  if (std::abs(initial.angles.alpha) > joint_limits.alpha_max)
    throw DomainError("initial.alpha outside joint limits");
  if (std::abs(initial.angles.beta) > joint_limits.beta_max) throw DomainError("initial.beta outside joint limits");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw DomainError("duration must be >= 0");
}

SimState initial_state(const ScenarioConfig& config) {
  SimState s;
  s.robot = config.initial.robot;
  s.angles = config.initial.angles;
  s.target = target_position(0.0, config.trajectory);
  if (config.initial.aim_at_target) {
    const double dx = s.target.x - s.robot.x, dy = s.target.y - s.robot.y;
    s.robot.theta = wrap_angle(std::atan2(dy, dx) - s.angles.alpha);
    const double rise = config.body.body_center_height - config.body.camera_height;
    s.angles.beta = std::clamp(std::atan2(rise, std::hypot(dx, dy)), -config.joint_limits.beta_max,
                               config.joint_limits.beta_max);
  }
  s.robot.theta = wrap_angle(s.robot.theta);
  return s;
}

Simulator::Simulator(ScenarioConfig config)
    : config_((config.validate(), std::move(config))),
      state_(initial_state(config_)),
      perception_(config_.perception, config_.intrinsics, config_.seed) {}

std::size_t Simulator::tick_count() const {
  return static_cast<std::size_t>(std::floor(config_.duration / config_.dt + 1e-9));
}

LogRow Simulator::step() {
  const auto rendered = render_measurement(state_, config_.body, config_.intrinsics, config_.joint_limits);
  std::optional<BoxMeasurement> truth;
  if (rendered && rendered->visible) truth = rendered->box;

  const auto seen = perception_.update(truth, state_.t);

  ControlCommand cmd;
  if (!seen.box) {
    controller_state_.last = cmd;
  } else if (seen.hold) {
    cmd = hold_and_decay(controller_state_, config_.controller);
  } else {
    cmd = controller_step(*seen.box, state_.angles, config_.intrinsics, config_.controller, controller_state_);
  }

  LogRow row;
  row.t = static_cast<double>(tick_) * config_.dt;
  const std::optional<BoxMeasurement> shown = seen.box ? seen.box
                                              : rendered ? std::optional<BoxMeasurement>(rendered->box)
                                                         : std::nullopt;
  if (shown) {
    const ImageErrors err = compute_errors(*shown, config_.intrinsics, config_.controller.gains.desired_half_height);
    row.e_u = err.e_u;
    row.e_v = err.e_v;
    row.e_v2 = err.e_v2;
    row.h = shown->half_height();
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.e_u = row.e_v = row.e_v2 = row.h = nan;
  }
  row.v_r = cmd.v_r;
  row.omega_r = cmd.omega_r;
  row.omega_alpha = cmd.omega_alpha;
  row.omega_beta = cmd.omega_beta;
  row.alpha = state_.angles.alpha;
  row.beta = state_.angles.beta;
  row.robot_x = state_.robot.x;
  row.robot_y = state_.robot.y;
  row.theta = state_.robot.theta;
  row.target_x = state_.target.x;
  row.target_y = state_.target.y;
  row.score = seen.score;
  row.region_scale = seen.region_scale;
  row.failure_state = seen.failure_state;

  state_ = integrate(state_, cmd, config_.dt, config_.joint_limits);
  ++tick_;
  state_.t = static_cast<double>(tick_) * config_.dt;
  state_.target = target_position(state_.t, config_.trajectory);
  return row;
}

TimeSeriesLog run_scenario(const ScenarioConfig& config) {
  Simulator sim(config);
  TimeSeriesLog log;
  const std::size_t n = sim.tick_count();
  log.reserve(n);
  for (std::size_t i = 0; i < n; ++i) log.push_back(sim.step());
  return log;
}

}  // namespace follow
