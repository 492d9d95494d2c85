#pragma once

#include <Eigen/Dense>

#include "hatchling/errors.hpp"

namespace hatchling::kinematics {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Mechanical range of both front-flipper joints, degrees.
inline constexpr double kModelRangeDeg = 90.0;

/// Joint state of one front flipper. pitch drives the up/down (shoulder)
/// motion, yaw the fore/aft (elbow) motion. Degrees at every interface.
struct JointAngles {
  double pitch_deg = 0.0;
  double yaw_deg = 0.0;
};

/// l1: short link between the two shoulder motors. l2: flipper itself.
/// l1 is not fixed by the hardware drawings; 2 cm is the configurable default.
struct LinkLengths {
  double l1_cm = 2.0;
  double l2_cm = 12.5;
};

struct IntervalDeg {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

/// Operational ranges of the three motor channels during gaits:
/// alpha = front base (up/down), beta = front fore/aft, gamma = rear
/// horizontal. Narrower than the +/-90 mechanical range on purpose.
struct GaitJointRanges {
  IntervalDeg alpha{-55.0, 90.0};
  IntervalDeg beta{-10.0, 75.0};
  IntervalDeg gamma{-30.0, 90.0};

  void validate() const;
};

enum class JointAxis { Alpha, Beta, Gamma };

/// Rotation of the shoulder pitch joint, base frame -> joint 1.
/// Throws RangeError outside the +/-90 mechanical range.
Eigen::Matrix4d transform_base_to_joint1(double pitch_deg);

/// Yaw rotation plus the short-link offset, joint 1 -> joint 2. The
/// translation (l1 cos yaw, l1 sin yaw, 0) rotates with the joint.
Eigen::Matrix4d transform_joint1_to_joint2(double yaw_deg, double l1_cm);

/// Pure translation along the flipper, joint 2 -> tip.
Eigen::Matrix4d transform_joint2_to_endpoint(double l2_cm);

/// Flipper tip position in the base frame, cm. Closed form of the chained
/// transforms:
///   x = (l1+l2) cos(yaw) cos(pitch)
///   y = (l1+l2) sin(yaw)
///   z = -(l1+l2) cos(yaw) sin(pitch)
Eigen::Vector3d forward_kinematics(const JointAngles& angles,
                                   const LinkLengths& links);

/// Nearest in-range value for the given motor channel. Total and idempotent.
double clamp_to_gait_range(double angle_deg, JointAxis axis,
                           const GaitJointRanges& ranges);

}  // namespace hatchling::kinematics
