#ifndef FOLLOW_GEOMETRY_HPP
#define FOLLOW_GEOMETRY_HPP

// Frames used throughout:
//   F_r  robot: X forward, Y left, Z up; origin at the wheel-axis midpoint.
//   F_b  pan/tilt base: level frame rotated by the pan angle, camera-style
//        axes (x right, y down, z forward). F_a shares its orientation.
//   F_c  camera: x right (image u), y down (image v), z optical axis.
//
// Positive pan (alpha) turns the camera to the left (counter-clockwise seen
// from above); positive tilt (beta) raises the optical axis.

#include <array>
#include <stdexcept>

namespace follow {

inline constexpr double kPi = 3.14159265358979323846;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BehindCameraError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DepthUnobservableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
};

Vec3 cross(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);

struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity();
  Mat3 transposed() const;
  double determinant() const;

  friend Mat3 operator*(const Mat3& a, const Mat3& b);
  friend Vec3 operator*(const Mat3& a, const Vec3& v);
};

// A point expressed in the camera frame; z is the optical-axis depth.
using CameraPoint = Vec3;

struct CameraIntrinsics {
  double alpha_x = 500.0;
  double alpha_y = 500.0;
  double u0 = 320.0;
  double v0 = 240.0;
  int width = 640;
  int height = 480;

  // Throws DomainError naming the offending field.
  void validate() const;
};

struct JointLimits {
  double alpha_max = kPi / 2.0;
  double beta_max = kPi / 3.0;
};

struct PanTiltAngles {
  double alpha = 0.0;
  double beta = 0.0;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

struct PlanarPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Rotation taking robot-frame vectors into the camera frame, ^cR_r.
/// Built as tilt(beta) * base alignment * pan(alpha); throws DomainError
/// when either angle exceeds `limits`.
Mat3 rotation_camera_from_robot(PanTiltAngles angles, const JointLimits& limits = {});

/// Rotation taking camera-frame vectors into the level tilt base frame F_b.
Mat3 rotation_base_from_camera(double beta);

/// Pinhole projection. Throws BehindCameraError when p.z <= 0.
Pixel project(const CameraPoint& p, const CameraIntrinsics& k);

/// World point into the camera frame for a camera mounted `camera_height`
/// above the robot origin. World is Z-up with the robot moving in z = 0.
CameraPoint world_to_camera(const PlanarPose& robot, double camera_height, PanTiltAngles angles,
                            const Vec3& p_world, const JointLimits& limits = {});

/// World point into the robot frame (origin on the ground, Z up).
Vec3 world_to_robot(const PlanarPose& robot, const Vec3& p_world);

/// Optical-axis depth of a point with image row error `e_v` whose vertical
/// coordinate in F_b is `b_y` (y down, so points above the camera are negative).
double depth_from_height(double e_v, double beta, double b_y, const CameraIntrinsics& k);

/// Guard used by depth_from_height on |e_v cos(beta) - alpha_y sin(beta)|.
inline double depth_epsilon(const CameraIntrinsics& k) { return 1e-6 * k.alpha_y; }

double wrap_angle(double a);

}  // namespace follow

#endif  // FOLLOW_GEOMETRY_HPP
