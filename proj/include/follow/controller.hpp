#ifndef FOLLOW_CONTROLLER_HPP
#define FOLLOW_CONTROLLER_HPP

#include <stdexcept>
#include <string_view>

#include "follow/geometry.hpp"

namespace follow {

class SingularConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tracked human box: center (u, v) and top-border midpoint row v2.
struct BoxMeasurement {
  double u = 0.0;
  double v = 0.0;
  double v2 = 0.0;
  double score = 1.0;

  double half_height() const { return v - v2; }
  bool valid() const { return v2 < v && score >= 0.0 && score <= 1.0; }
};

struct ImageErrors {
  double e_u = 0.0;
  double e_v = 0.0;
  double e_v2 = 0.0;
};

/// Interaction terms of the error dynamics
///   de_u/dt  = l1 V Om1 + A (w_a + w_r) + B w_b
///   de_v/dt  = l1 V Om2 + C (w_a + w_r) + D w_b
///   de_v2/dt = de_v/dt - l2 V Om3 - E (w_a + w_r) - F w_b
struct JacobianTerms {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;
};

enum class JacobianMode {
  kAsPrinted,  // reference closed forms with their original sign conventions, kept for comparison
  kReDerived,  // obtained by differentiating the pinhole model; default
};

std::string_view to_string(JacobianMode mode);
JacobianMode parse_jacobian_mode(std::string_view text);  // throws std::invalid_argument

struct ControllerGains {
  double k1 = 0.5;
  double k2 = 0.5;
  double k3 = 0.5;
  // Inverse metric heights of the body center and head top in F_b. Only the
  // magnitude is used; the sign follows from the image row (positive depth).
  double lambda1 = 5.0;
  double lambda2 = 1.0 / 1.1;
  double desired_half_height = 100.0;  // H, pixels

  void validate() const;
};

struct SaturationLimits {
  double v_max = 1.2;
  double omega_pan_max = 1.5;
  double omega_tilt_max = 1.5;
  double omega_robot_max = 1.0;

  void validate() const;
};

struct SaturationFlags {
  bool v_r = false;
  bool omega_r = false;
  bool omega_alpha = false;
  bool omega_beta = false;

  bool any() const { return v_r || omega_r || omega_alpha || omega_beta; }
};

struct ControlCommand {
  double v_r = 0.0;
  double omega_r = 0.0;
  double omega_alpha = 0.0;
  double omega_beta = 0.0;
  SaturationFlags saturated;
  bool singular = false;  // hold-and-decay issued because the law was singular
  bool held = false;      // hold-and-decay issued for any reason
};

/// Caller-owned memory for hold-and-decay.
struct ControllerState {
  ControlCommand last;
};

struct ControllerConfig {
  ControllerGains gains;
  SaturationLimits limits;
  JacobianMode mode = JacobianMode::kReDerived;
  double hold_decay = 0.5;  // V_r factor per held tick
};

struct LawOutput {
  double v_r = 0.0;
  double omega_alpha = 0.0;
  double omega_beta = 0.0;
};

ImageErrors compute_errors(const BoxMeasurement& box, const CameraIntrinsics& k, double desired_half_height);

JacobianTerms jacobian_terms(const ImageErrors& err, const BoxMeasurement& box, PanTiltAngles angles,
                             const CameraIntrinsics& k, const ControllerGains& gains,
                             JacobianMode mode = JacobianMode::kReDerived);

/// Determinant of the 3x3 system solved by control_law.
double law_denominator(const JacobianTerms& t, const ControllerGains& gains);

/// Scale-aware singularity guard 1e-6 * alpha_x * alpha_y * max(|l1|, |l2|).
double law_epsilon(const ControllerGains& gains, const CameraIntrinsics& k);

/// Closed-form (V_r, w_alpha, w_beta) that makes every error channel decay as
/// de_i/dt = -K_i e_i under the linear model. Throws SingularConfigurationError.
LawOutput control_law(const ImageErrors& err, const JacobianTerms& terms, const ControllerGains& gains,
                      double omega_r, const CameraIntrinsics& k);

struct ErrorRates {
  double e_u = 0.0;
  double e_v = 0.0;
  double e_v2 = 0.0;
};

/// Linear error-rate model for a given command.
ErrorRates predict_error_rates(const JacobianTerms& t, const ControllerGains& gains, double v_r,
                               double omega_r, double omega_alpha, double omega_beta);

/// Robot yaw-rate rule: zero inside the +-pi/6 pan deadband, 0.1 * alpha outside.
double robot_angular_strategy(double alpha);

ControlCommand clamp_command(ControlCommand cmd, const SaturationLimits& limits);

/// Hold the previous angular commands and decay V_r.
ControlCommand hold_and_decay(ControllerState& state, const ControllerConfig& config);

/// One control tick: errors, terms, yaw strategy, law, clamp.
ControlCommand controller_step(const BoxMeasurement& box, PanTiltAngles angles, const CameraIntrinsics& k,
                               const ControllerConfig& config, ControllerState& state);

}  // namespace follow

#endif  // FOLLOW_CONTROLLER_HPP
