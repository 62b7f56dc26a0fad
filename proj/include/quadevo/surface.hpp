#pragma once

#include <array>
#include <string>

namespace quadevo {

// Parametric terrain model consumed by the surrogate rollout.
struct SurfaceModel {
    std::string name;
    double hardness = 1.0;       // [0,1], 1 = rigid
    double roughness = 0.0;      // [0,1], 0 = fine-textured
    double friction = 0.9;       // [0,1]
    double sinkage_gain = 30.0;  // mm of foot sink at hardness 0
    double noise_gain = 25.0;    // mm of ground-height noise at roughness 1

    bool valid() const;
};

// The four reference surfaces: A hard/fine (baseline), B soft/fine,
// C hard/coarse, D soft/coarse. Friction and gains are config defaults.
std::array<SurfaceModel, 4> surface_library();

}  // namespace quadevo
