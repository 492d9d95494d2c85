#include "hatchling/kinematics.hpp"

#include <cmath>
#include <string>

namespace hatchling::kinematics {

namespace {

void check_model_range(double angle_deg, const char* which) {
  if (!(angle_deg >= -kModelRangeDeg && angle_deg <= kModelRangeDeg)) {
    throw RangeError(std::string(which) + " angle " +
                     std::to_string(angle_deg) +
                     " deg outside mechanical range [-90, 90]");
  }
}

void check_length(double l_cm, const char* which) {
  if (!(l_cm > 0.0)) {
    throw LengthError(std::string(which) + " must be positive, got " +
                      std::to_string(l_cm));
  }
}

}  // namespace

void GaitJointRanges::validate() const {
  if (alpha.lo > alpha.hi || beta.lo > beta.hi || gamma.lo > gamma.hi) {
    throw ConfigError("gait joint range stored with lo > hi");
  }
}

Eigen::Matrix4d transform_base_to_joint1(double pitch_deg) {
  check_model_range(pitch_deg, "pitch");
  const double c = std::cos(deg2rad(pitch_deg));
  const double s = std::sin(deg2rad(pitch_deg));
  Eigen::Matrix4d t;
  t <<  c, 0.0,   s, 0.0,
      0.0, 1.0, 0.0, 0.0,
       -s, 0.0,   c, 0.0,
      0.0, 0.0, 0.0, 1.0;
  return t;
}

Eigen::Matrix4d transform_joint1_to_joint2(double yaw_deg, double l1_cm) {
  check_model_range(yaw_deg, "yaw");
  check_length(l1_cm, "l1");
  const double c = std::cos(deg2rad(yaw_deg));
  const double s = std::sin(deg2rad(yaw_deg));
  Eigen::Matrix4d t;
  t <<   c,  -s, 0.0, l1_cm * c,
         s,   c, 0.0, l1_cm * s,
       0.0, 0.0, 1.0, 0.0,
       0.0, 0.0, 0.0, 1.0;
  return t;
}

Eigen::Matrix4d transform_joint2_to_endpoint(double l2_cm) {
  check_length(l2_cm, "l2");
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t(0, 3) = l2_cm;
  return t;
}

Eigen::Vector3d forward_kinematics(const JointAngles& angles,
                                   const LinkLengths& links) {
  check_model_range(angles.pitch_deg, "pitch");
  check_model_range(angles.yaw_deg, "yaw");
  check_length(links.l1_cm, "l1");
  check_length(links.l2_cm, "l2");

  const double reach = links.l1_cm + links.l2_cm;
  const double c1 = std::cos(deg2rad(angles.pitch_deg));
  const double s1 = std::sin(deg2rad(angles.pitch_deg));
  const double c2 = std::cos(deg2rad(angles.yaw_deg));
  const double s2 = std::sin(deg2rad(angles.yaw_deg));
  return {reach * c2 * c1, reach * s2, -reach * c2 * s1};
}

double clamp_to_gait_range(double angle_deg, JointAxis axis,
                           const GaitJointRanges& ranges) {
  ranges.validate();
  switch (axis) {
    case JointAxis::Alpha:
      return ranges.alpha.clamp(angle_deg);
    case JointAxis::Beta:
      return ranges.beta.clamp(angle_deg);
    case JointAxis::Gamma:
      return ranges.gamma.clamp(angle_deg);
  }
  throw RangeError("unknown joint axis");
}

}  // namespace hatchling::kinematics
