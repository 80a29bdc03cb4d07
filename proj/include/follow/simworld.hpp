#ifndef FOLLOW_SIMWORLD_HPP
#define FOLLOW_SIMWORLD_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "follow/controller.hpp"
#include "follow/geometry.hpp"
#include "follow/perception.hpp"

namespace follow {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct SimState {
  double t = 0.0;
  PlanarPose robot;
  PanTiltAngles angles;
  Point2 target;
};

enum class TrajectoryKind { kCircle, kLine, kWaypoints };

struct TargetTrajectory {
  TrajectoryKind kind = TrajectoryKind::kCircle;
  // circle: (cx - r cos(rate t + phase), cy - r sin(rate t + phase))
  Point2 center{0.5, 0.5};
  double radius = 0.4;
  double rate = 1.0;
  // line: start + velocity * t
  Point2 start;
  Point2 velocity;
  // waypoints: constant-speed polyline, parked at the last point afterwards
  std::vector<Point2> waypoints;
  double speed = 0.0;
  double phase = 0.0;  // radians for circles, seconds of time shift otherwise

  void validate() const;
};

Point2 target_position(double t, const TargetTrajectory& traj);

struct BodyModel {
  double camera_height = 0.7;
  double body_center_height = 0.9;
  double head_height = 1.8;

  void validate() const;
  /// |1 / b_y| of the body center and head top relative to the camera.
  double lambda1() const;
  double lambda2() const;
};

/// Semi-implicit Euler step of the unicycle base and pan/tilt joints.
SimState integrate(const SimState& state, const ControlCommand& cmd, double dt, const JointLimits& limits = {});

/// Closed-form constant-twist step (exact arc); joints as in integrate.
SimState integrate_exact(const SimState& state, const ControlCommand& cmd, double dt, const JointLimits& limits = {});

struct RenderedTarget {
  BoxMeasurement box;
  CameraPoint body_center;  // camera frame
  CameraPoint head_top;     // camera frame
  double head_u = 0.0;      // column of the head-top projection
  bool visible = false;     // box center inside the image
};

/// Projects the body-center and head-top points; empty when either is
/// behind the camera.
std::optional<RenderedTarget> render_measurement(const SimState& state, const BodyModel& body,
                                                 const CameraIntrinsics& k, const JointLimits& limits = {});

struct InitialCondition {
  PlanarPose robot;
  PanTiltAngles angles;
  bool aim_at_target = false;  // override theta and beta to center the body at t = 0
};

struct ScenarioConfig {
  CameraIntrinsics intrinsics;
  JointLimits joint_limits;
  BodyModel body;
  ControllerConfig controller;
  TargetTrajectory trajectory;
  PerceptionConfig perception;
  InitialCondition initial;
  double dt = 0.02;
  double duration = 60.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws DomainError naming the field
};

/// One logged tick. Field order matches the CSV column order.
struct LogRow {
  double t = 0.0;
  double e_u = 0.0;
  double e_v = 0.0;
  double e_v2 = 0.0;
  double h = 0.0;
  double v_r = 0.0;
  double omega_r = 0.0;
  double omega_alpha = 0.0;
  double omega_beta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double robot_x = 0.0;
  double robot_y = 0.0;
  double theta = 0.0;
  double target_x = 0.0;
  double target_y = 0.0;
  double score = 0.0;
  double region_scale = 1.0;
  bool failure_state = false;
};

using TimeSeriesLog = std::vector<LogRow>;

SimState initial_state(const ScenarioConfig& config);

/// Closed-loop world: render, perceive, control, integrate.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig config);

  LogRow step();
  std::size_t tick_count() const;  // ticks implied by duration / dt

  const SimState& state() const { return state_; }
  const ScenarioConfig& config() const { return config_; }
  const ControlCommand& last_command() const { return controller_state_.last; }
  const PerceptionPipeline& perception() const { return perception_; }

 private:
  ScenarioConfig config_;
  SimState state_;
  PerceptionPipeline perception_;
  ControllerState controller_state_;
  std::size_t tick_ = 0;
};

TimeSeriesLog run_scenario(const ScenarioConfig& config);

}  // namespace follow

#endif  // FOLLOW_SIMWORLD_HPP
