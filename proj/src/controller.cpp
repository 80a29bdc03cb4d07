#include "follow/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace follow {

std::string_view to_string(JacobianMode mode) {
  return mode == JacobianMode::kAsPrinted ? "as-printed" : "re-derived";
}

JacobianMode parse_jacobian_mode(std::string_view text) {
  if (text == "as-printed") return JacobianMode::kAsPrinted;
  if (text == "re-derived") return JacobianMode::kReDerived;
  throw std::invalid_argument("unknown jacobian mode '" + std::string(text) +
                              "' (expected as-printed or re-derived)");
}

void ControllerGains::validate() const {
  if (!(k1 > 0.0)) throw DomainError("gains.k1 must be > 0");
  if (!(k2 > 0.0)) throw DomainError("gains.k2 must be > 0");
  if (!(k3 > 0.0)) throw DomainError("gains.k3 must be > 0");
  if (!(desired_half_height > 0.0)) throw DomainError("gains.H must be > 0");
  if (lambda1 == 0.0 || !std::isfinite(lambda1)) throw DomainError("gains.lambda1 must be finite and non-zero");
  if (lambda2 == 0.0 || !std::isfinite(lambda2)) throw DomainError("gains.lambda2 must be finite and non-zero");
}

void SaturationLimits::validate() const {
  if (!(v_max > 0.0)) throw DomainError("saturation.v_max must be > 0");
  if (!(omega_pan_max > 0.0)) throw DomainError("saturation.omega_pan_max must be > 0");
  if (!(omega_tilt_max > 0.0)) throw DomainError("saturation.omega_tilt_max must be > 0");
  if (!(omega_robot_max > 0.0)) throw DomainError("saturation.omega_robot_max must be > 0");
}

ImageErrors compute_errors(const BoxMeasurement& box, const CameraIntrinsics& k, double desired_half_height) {
  return {box.u - k.u0, box.v - k.v0, box.v - box.v2 - desired_half_height};
}

namespace {

JacobianTerms terms_as_printed(const ImageErrors& err, const BoxMeasurement& box, PanTiltAngles angles,
                               const CameraIntrinsics& k) {
  const double ax = k.alpha_x, ay = k.alpha_y;
  const double ca = std::cos(angles.alpha), sa = std::sin(angles.alpha);
  const double cb = std::cos(angles.beta), sb = std::sin(angles.beta);
  const double eu = err.e_u, ev = err.e_v;
  const double w = box.v2 - k.v0;
  const double eu2 = box.u - k.u0;  // the printed u2 is the top-border midpoint column, i.e. u

  JacobianTerms t;
  t.omega1 = (ax * sa - ev * ca * cb) * (ev * cb + ay * sb) / ay;
  t.omega2 = (ev * ca * cb + ay * ca * sb) * (-ev * cb - ay * sb) / ay;
  t.omega3 = (w * ca * cb + ay * ca * sb) * (-w * cb - ay * sb) / ay;
  t.a = (ax * ax * ay * cb - ax * ax * sb * ev + eu * eu * ay * cb) / (ax * ay);
  t.b = -(eu * ev) / ay;
  t.c = (ay * sb * eu + eu * ev * cb) / ax;
  t.d = -(ay * ay + ev * ev) / ay;
  t.e = (ay * sb * eu2 - eu2 * w * cb) / ax;
  t.f = -(ay * ay + err.e_v2 * err.e_v2) / ay;
  return t;
}

JacobianTerms terms_re_derived(const ImageErrors& err, const BoxMeasurement& box, PanTiltAngles angles,
                               const CameraIntrinsics& k, const ControllerGains& gains) {
  const double ax = k.alpha_x, ay = k.alpha_y;
  const double ca = std::cos(angles.alpha), sa = std::sin(angles.alpha);
  const double cb = std::cos(angles.beta), sb = std::sin(angles.beta);
  const double eu = err.e_u, ev = err.e_v;
  const double w = box.v2 - k.v0;

  // |row denominators| of the depth-from-height relation; lambda * |d| / alpha_y = 1 / depth.
  const double d1 = std::abs(ev * cb - ay * sb);
  const double d2 = std::abs(w * cb - ay * sb);

  // Body center and head top share x in F_b (vertical segment), so x2 = x1 and
  // the head column follows from the depth ratio z1 / z2.
  const double l1 = std::abs(gains.lambda1), l2 = std::abs(gains.lambda2);
  const double eu2 = d1 > depth_epsilon(k) ? eu * (l2 * d2) / (l1 * d1) : eu;

  JacobianTerms t;
  t.omega1 = d1 * (eu * ca * cb - ax * sa) / ay;
  t.omega2 = d1 * (ev * ca * cb - ay * ca * sb) / ay;
  t.omega3 = d2 * (w * ca * cb - ay * ca * sb) / ay;
  t.a = ax * cb + ax * sb * ev / ay + eu * eu * cb / ax;
  t.b = eu * ev / ay;
  t.c = (eu * ev * cb - ay * sb * eu) / ax;
  t.d = (ay * ay + ev * ev) / ay;
  t.e = (eu2 * w * cb - ay * sb * eu2) / ax;
  t.f = (ay * ay + w * w) / ay;
  return t;
}

double det3(double a11, double a12, double a13, double a21, double a22, double a23, double a31, double a32,
            double a33) {
  return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) + a13 * (a21 * a32 - a22 * a31);
}

double clamp_channel(double value, double bound, bool& flag) {
  if (value > bound) {
    flag = true;
    return bound;
  }
  if (value < -bound) {
    flag = true;
    return -bound;
  }
  return value;
}

}  // namespace

JacobianTerms jacobian_terms(const ImageErrors& err, const BoxMeasurement& box, PanTiltAngles angles,
                             const CameraIntrinsics& k, const ControllerGains& gains, JacobianMode mode) {
  return mode == JacobianMode::kAsPrinted ? terms_as_printed(err, box, angles, k)
                                          : terms_re_derived(err, box, angles, k, gains);
}

double law_denominator(const JacobianTerms& t, const ControllerGains& gains) {
  const double l1 = std::abs(gains.lambda1), l2 = std::abs(gains.lambda2);
  return (t.b * t.c - t.a * t.d) * t.omega3 * l2 + (t.a * t.f - t.b * t.e) * t.omega2 * l1 -
         (t.c * t.f - t.d * t.e) * t.omega1 * l1;
}

double law_epsilon(const ControllerGains& gains, const CameraIntrinsics& k) {
  return 1e-6 * k.alpha_x * k.alpha_y * std::max(std::abs(gains.lambda1), std::abs(gains.lambda2));
}

LawOutput control_law(const ImageErrors& err, const JacobianTerms& t, const ControllerGains& gains,
                      double omega_r, const CameraIntrinsics& k) {
  const double l1 = std::abs(gains.lambda1), l2 = std::abs(gains.lambda2);
  const double den = law_denominator(t, gains);
  if (!(std::abs(den) > law_epsilon(gains, k)))
    throw SingularConfigurationError("interaction system is singular at this configuration");

  // Rows: e_u, e_v, and (e_v2 - e_v); unknowns (V_r, w_alpha, w_beta).
  const double m11 = l1 * t.omega1, m12 = t.a, m13 = t.b;
  const double m21 = l1 * t.omega2, m22 = t.c, m23 = t.d;
  const double m31 = -l2 * t.omega3, m32 = -t.e, m33 = -t.f;
  const double r1 = -gains.k1 * err.e_u - t.a * omega_r;
  const double r2 = -gains.k2 * err.e_v - t.c * omega_r;
  const double r3 = gains.k2 * err.e_v - gains.k3 * err.e_v2 + t.e * omega_r;

  // det3(m) equals `den` term for term; using `den` keeps the guard and the solve consistent.
  LawOutput out;
  out.v_r = det3(r1, m12, m13, r2, m22, m23, r3, m32, m33) / den;
  out.omega_alpha = det3(m11, r1, m13, m21, r2, m23, m31, r3, m33) / den;
  out.omega_beta = det3(m11, m12, r1, m21, m22, r2, m31, m32, r3) / den;
  return out;
}

ErrorRates predict_error_rates(const JacobianTerms& t, const ControllerGains& gains, double v_r, double omega_r,
                               double omega_alpha, double omega_beta) {
  const double l1 = std::abs(gains.lambda1), l2 = std::abs(gains.lambda2);
  const double w = omega_alpha + omega_r;
  ErrorRates r;
  r.e_u = l1 * v_r * t.omega1 + t.a * w + t.b * omega_beta;
  r.e_v = l1 * v_r * t.omega2 + t.c * w + t.d * omega_beta;
  r.e_v2 = r.e_v - l2 * v_r * t.omega3 - t.e * w - t.f * omega_beta;
  return r;
}

double robot_angular_strategy(double alpha) {
  if (-kPi / 6.0 < alpha && alpha < kPi / 6.0) return 0.0;
  return 0.1 * alpha;
}

ControlCommand clamp_command(ControlCommand cmd, const SaturationLimits& limits) {
  cmd.v_r = clamp_channel(cmd.v_r, limits.v_max, cmd.saturated.v_r);
  cmd.omega_r = clamp_channel(cmd.omega_r, limits.omega_robot_max, cmd.saturated.omega_r);
  cmd.omega_alpha = clamp_channel(cmd.omega_alpha, limits.omega_pan_max, cmd.saturated.omega_alpha);
  cmd.omega_beta = clamp_channel(cmd.omega_beta, limits.omega_tilt_max, cmd.saturated.omega_beta);
  return cmd;
}

ControlCommand hold_and_decay(ControllerState& state, const ControllerConfig& config) {
  ControlCommand cmd = state.last;
  cmd.v_r *= config.hold_decay;
  cmd.saturated = {};
  cmd.singular = false;
  cmd.held = true;
  cmd = clamp_command(cmd, config.limits);
  state.last = cmd;
  return cmd;
}

ControlCommand controller_step(const BoxMeasurement& box, PanTiltAngles angles, const CameraIntrinsics& k,
                               const ControllerConfig& config, ControllerState& state) {
  const ImageErrors err = compute_errors(box, k, config.gains.desired_half_height);
  const JacobianTerms terms = jacobian_terms(err, box, angles, k, config.gains, config.mode);
  ControlCommand cmd;
  cmd.omega_r = std::clamp(robot_angular_strategy(angles.alpha), -config.limits.omega_robot_max,
                           config.limits.omega_robot_max);
  try {
    const LawOutput law = control_law(err, terms, config.gains, cmd.omega_r, k);
    cmd.v_r = law.v_r;
    cmd.omega_alpha = law.omega_alpha;
    cmd.omega_beta = law.omega_beta;
  } catch (const SingularConfigurationError&) {
    cmd = hold_and_decay(state, config);
    cmd.singular = true;
    state.last = cmd;
    return cmd;
  }
  cmd = clamp_command(cmd, config.limits);
  state.last = cmd;
  return cmd;
}

}  // namespace follow
