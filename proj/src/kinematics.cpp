#include "quadevo/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace quadevo {

LegGeometry make_leg_geometry(const MorphologyParams& morphology) {
    LegGeometry g;
    g.femur_length = kFemurBaseMm + morphology.femur_extension;
    g.tibia_length = kTibiaBaseMm + morphology.tibia_extension;
    return g;
}

double stand_height_mm(const LegGeometry& geom) {
    return geom.coxa_length + 0.85 * (geom.femur_length + geom.tibia_length);
}

Vec3 forward_kinematics(const JointAngles& a, const LegGeometry& geom) {
    // leg plane: spanned by the rolled down-axis and the cranial axis
    const Vec3 down{std::sin(a.coxa), 0.0, -std::cos(a.coxa)};
    const Vec3 cranial{0.0, 1.0, 0.0};
    const double femur_dir = a.femur;
    const double tibia_dir = a.femur + a.tibia;
    const Vec3 foot = geom.coxa_length * down +
                      geom.femur_length * (std::cos(femur_dir) * down + std::sin(femur_dir) * cranial) +
                      geom.tibia_length * (std::cos(tibia_dir) * down + std::sin(tibia_dir) * cranial);
    return foot;
}

IkResult inverse_kinematics(const Vec3& foot, const LegGeometry& geom) {
    const double lf = geom.femur_length;
    const double lt = geom.tibia_length;

    const double coxa = std::atan2(foot.x, -foot.z);
    const double r = std::hypot(foot.x, foot.z);  // distance in the lateral-dorsal plane

    // planar problem from the femur pivot: a cranial, b along the rolled down-axis
    const double a = foot.y;
    const double b = r - geom.coxa_length;
    const double dist = std::hypot(a, b);

    const double outer = lf + lt;
    const double inner = std::abs(lf - lt);
    if (dist > outer) return {std::nullopt, dist - outer};
    if (dist < inner) return {std::nullopt, inner - dist};

    const double cos_knee = std::clamp((dist * dist - lf * lf - lt * lt) / (2.0 * lf * lt), -1.0, 1.0);
    const double tibia = std::acos(cos_knee);  // knee-backward branch
    const double alpha = std::atan2(a, b);
    const double femur = alpha - std::atan2(lt * std::sin(tibia), lf + lt * std::cos(tibia));

    JointAngles angles{coxa, femur, tibia};
    return {angles, 0.0};
}

bool within_joint_limits(const JointAngles& a) {
    return std::abs(a.coxa) <= kCoxaLimit && a.femur >= kFemurLimitLo && a.femur <= kFemurLimitHi &&
           a.tibia >= kTibiaLimitLo && a.tibia <= kTibiaLimitHi;
}

}  // namespace quadevo
