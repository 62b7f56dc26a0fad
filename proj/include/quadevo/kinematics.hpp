#pragma once

#include <array>
#include <optional>

#include "quadevo/params.hpp"
#include "quadevo/vec3.hpp"

namespace quadevo {

// Base link lengths (mm). Frozen design constants; femur/tibia extensions from
// MorphologyParams add onto the base values.
inline constexpr double kCoxaLengthMm = 60.0;
inline constexpr double kFemurBaseMm = 180.0;
inline constexpr double kTibiaBaseMm = 190.0;

// Documented joint limits (rad). The IK principal branch (coxa from the lateral
// offset, knee-backward planar solution) is the unique inverse inside this box
// for any pose whose foot lies below the hip.
inline constexpr double kCoxaLimit = 1.0;
inline constexpr double kFemurLimitLo = -1.8;
inline constexpr double kFemurLimitHi = 0.8;
inline constexpr double kTibiaLimitLo = 0.0;
inline constexpr double kTibiaLimitHi = 2.4;

struct LegGeometry {
    double coxa_length = kCoxaLengthMm;
    double femur_length = kFemurBaseMm;
    double tibia_length = kTibiaBaseMm;
    // hip anchor per leg in the body frame (mm), order FL, FR, BL, BR
    std::array<Vec3, 4> hip_positions{{{-90.0, 180.0, 0.0},
                                       {90.0, 180.0, 0.0},
                                       {-90.0, -180.0, 0.0},
                                       {90.0, -180.0, 0.0}}};
};

LegGeometry make_leg_geometry(const MorphologyParams& morphology);

// Nominal body height above ground: hips sit so the legs run at ~85% of full
// extension when the foot is on the ground plane. Grows with leg length.
double stand_height_mm(const LegGeometry& geom);

struct JointAngles {
    double coxa = 0.0;   // roll about the cranial axis; positive moves the foot +lateral
    double femur = 0.0;  // pitch from straight-down; positive tilts the femur cranially
    double tibia = 0.0;  // knee bend relative to the femur; 0 = straight leg
};

// Zero pose: leg stretched straight down, foot at (0, 0, -(coxa+femur+tibia)).
Vec3 forward_kinematics(const JointAngles& angles, const LegGeometry& geom);

struct IkResult {
    std::optional<JointAngles> angles;
    // distance (mm) by which the target misses the reachable annulus; 0 when solved
    double shortfall = 0.0;

    bool ok() const { return angles.has_value(); }
};

// Foot target in the hip frame (x lateral, y cranial, z dorsal; feet below the
// hip have z < 0). Knee-backward branch: the knee sits caudal of the hip-foot line.
IkResult inverse_kinematics(const Vec3& foot, const LegGeometry& geom);

bool within_joint_limits(const JointAngles& a);

}  // namespace quadevo
