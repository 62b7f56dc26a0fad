#pragma once

#include <cstdint>

#include "quadevo/params.hpp"
#include "quadevo/rollout.hpp"
#include "quadevo/surface.hpp"

namespace quadevo {

// Both objectives are maximized: speed in m/min (>= 0) and a stability score
// in [-1, 0] (0 = perfectly steady).
struct Fitness {
    double speed = 0.0;
    double stability = 0.0;
};

struct FitnessConfig {
    // weighting between acceleration and orientation spread; 1/50 balances the
    // two contributions on the reference sensor scales
    double alpha = 0.02;
    // maps the raw (negative) spread sum into [-1, 0]; calibrated so the 5th
    // percentile of random-search individuals lands near -1, then frozen
    double stability_scale = 10.5;

    RolloutParams rollout;
};

// ||P_end - P_start|| / (t_end - t_start), in m/min.
double speed_fitness(const EvaluationTrace& trace);

// -sum over axes of (alpha * std(Acc) + std(Ang)), population standard
// deviation, scaled by stability_scale and clamped to [-1, 0].
double stability_fitness(const EvaluationTrace& trace, const FitnessConfig& cfg);

// Raw unscaled value of the stability sum (<= 0), before scale and clamp.
double stability_fitness_raw(const EvaluationTrace& trace, const FitnessConfig& cfg);

// Full evaluation protocol: rollout then both objectives. A failed rollout
// (unreachable IK command) maps to the floor (0, -1) instead of propagating.
Fitness evaluate(const GaitSpec& spec, const SurfaceModel& surface, std::uint64_t seed,
                 const FitnessConfig& cfg);

inline constexpr Fitness kFailedFitness{0.0, -1.0};

}  // namespace quadevo
