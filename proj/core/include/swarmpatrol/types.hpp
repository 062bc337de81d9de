#ifndef SWARMPATROL_TYPES_HPP_
#define SWARMPATROL_TYPES_HPP_

#include <Eigen/Core>

namespace swarmpatrol {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Geometric tolerance for coplanarity / degenerate-area checks, SI units.
inline constexpr double kGeomTol = 1e-6;

// Minimum clearance kept between a flyable point and any building prism,
// used both for viewpoint occlusion filtering and route planning.
inline constexpr double kClearanceMargin = 1.0;

// Pose tolerances for "agent is at a viewpoint".
inline constexpr double kPoseTolPos = 0.5;    // meters
inline constexpr double kPoseTolAngDeg = 5.0; // degrees, bearing and tilt

inline constexpr double kPhysicsDt = 0.1;     // 10 Hz body integration
inline constexpr int kTicksPerAlgoStep = 10;  // 1 Hz message/decision cadence

// Seconds without hearing from a task winner before its slot is considered
// abandoned and reopened for bidding.
inline constexpr double kWinnerLostTimeout = 10.0;

}  // namespace swarmpatrol

#endif  // SWARMPATROL_TYPES_HPP_
