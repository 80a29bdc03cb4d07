#include "follow/geometry.hpp"

#include <cmath>
#include <string>

namespace follow {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Mat3 Mat3::identity() {
  Mat3 r;
  for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
  return r;
}

double Mat3::determinant() const {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
      r.m[i][j] = s;
    }
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
          a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
          a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}

void CameraIntrinsics::validate() const {
  if (!(alpha_x > 0.0)) throw DomainError("intrinsics.alpha_x must be > 0");
  if (!(alpha_y > 0.0)) throw DomainError("intrinsics.alpha_y must be > 0");
  if (width <= 0) throw DomainError("intrinsics.width must be > 0");
  if (height <= 0) throw DomainError("intrinsics.height must be > 0");
  if (!(u0 >= 0.0 && u0 < width)) throw DomainError("intrinsics.u0 must lie in [0, width)");
  if (!(v0 >= 0.0 && v0 < height)) throw DomainError("intrinsics.v0 must lie in [0, height)");
}

namespace {

// Camera axes expressed in F_r at zero pan/tilt: x_c = -Y_r, y_c = -Z_r, z_c = X_r.
Mat3 base_alignment() {
  Mat3 r;
  r.m = {{{0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}, {1.0, 0.0, 0.0}}};
  return r;
}

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r.m = {{{1.0, 0.0, 0.0}, {0.0, c, -s}, {0.0, s, c}}};
  return r;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r.m = {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
  return r;
}

}  // namespace

Mat3 rotation_base_from_camera(double beta) { return rot_x(beta); }

Mat3 rotation_camera_from_robot(PanTiltAngles angles, const JointLimits& limits) {
  if (!(std::abs(angles.alpha) <= limits.alpha_max))
    throw DomainError("pan angle " + std::to_string(angles.alpha) + " outside joint limit");
  if (!(std::abs(angles.beta) <= limits.beta_max))
    throw DomainError("tilt angle " + std::to_string(angles.beta) + " outside joint limit");
  // p_c = Rx(beta)^T * p_b,  p_b = base * Rz(alpha)^T * p_r
  return rot_x(angles.beta).transposed() * base_alignment() * rot_z(angles.alpha).transposed();
}

Pixel project(const CameraPoint& p, const CameraIntrinsics& k) {
  if (!(p.z > 0.0)) throw BehindCameraError("point is not in front of the camera");
  return {k.u0 + k.alpha_x * p.x / p.z, k.v0 + k.alpha_y * p.y / p.z};
}

Vec3 world_to_robot(const PlanarPose& robot, const Vec3& p_world) {
  const double c = std::cos(robot.theta), s = std::sin(robot.theta);
  const double dx = p_world.x - robot.x, dy = p_world.y - robot.y;
  return {c * dx + s * dy, -s * dx + c * dy, p_world.z};
}

CameraPoint world_to_camera(const PlanarPose& robot, double camera_height, PanTiltAngles angles,
                            const Vec3& p_world, const JointLimits& limits) {
  Vec3 p_r = world_to_robot(robot, p_world);
  p_r.z -= camera_height;
  return rotation_camera_from_robot(angles, limits) * p_r;
}

double depth_from_height(double e_v, double beta, double b_y, const CameraIntrinsics& k) {
  const double den = e_v * std::cos(beta) - k.alpha_y * std::sin(beta);
  if (std::abs(den) <= depth_epsilon(k))
    throw DepthUnobservableError("target row is degenerate with the tilt angle");
  return k.alpha_y * b_y / den;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace follow
