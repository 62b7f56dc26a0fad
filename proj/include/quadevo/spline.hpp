#pragma once

#include <array>
#include <ostream>

#include "quadevo/params.hpp"
#include "quadevo/vec3.hpp"

namespace quadevo {

// Closed foot-tip trajectory for one gait cycle, phase in [0,1).
//
// Knot order follows the traversal: ground_front (phase 0) -> stance ->
// ground_back -> air_back -> air_top -> air_front -> loop back to ground_front.
// The stance segment is a straight line traversed at constant velocity (both
// ground knots have lateral = dorsal = 0, so stance stays exactly in the ground
// plane). Swing segments are cubic Hermite; air-knot tangents use the closed
// Catmull-Rom form m_i = (p_{i+1} - p_{i-1}) / (phi_{i+1} - phi_{i-1}) with
// cyclic indexing, and the two ground knots carry the stance slope so the curve
// is C1 across the stance boundaries and the loop seam. The three air knots
// split the swing window proportionally to chord length.
struct TrajectorySpline {
    std::array<Vec3, 5> knots{};         // mm: gf, gb, ab, at, af
    std::array<double, 5> knot_phases{};  // strictly increasing, knot_phases[0] == 0
    std::array<Vec3, 5> tangents{};       // mm per unit phase
    double period_s = 0.0;                // 1 / frequency

    double stance_end_phase() const { return knot_phases[1]; }
};

TrajectorySpline build_spline(const GaitSpec& spec);

// Position at a phase in [0,1); throws std::domain_error outside that range.
Vec3 sample_foot(const TrajectorySpline& spline, double phase);

// Convenience wrapper that wraps any finite phase into [0,1).
Vec3 sample_foot_wrapped(const TrajectorySpline& spline, double phase);

// dP/dphase (mm per unit phase), same domain as sample_foot.
Vec3 sample_foot_velocity(const TrajectorySpline& spline, double phase);

struct WagOffset {
    double lateral = 0.0;  // mm, one oscillation per gait cycle
    double cranial = 0.0;  // mm, two oscillations per gait cycle
};

WagOffset wag_offset(double phase, const GaitParams& gait);

// Static crawl phase offsets for {front-left, front-right, back-left, back-right}.
inline constexpr std::array<double, 4> kLegPhaseOffsets = {0.0, 0.5, 0.75, 0.25};

// Commanded foot positions for all four legs at time t (seconds), in trajectory
// coordinates (lateral, cranial, dorsal-above-ground) relative to each leg's own
// hip axis. Each leg samples the shared spline at its own phase and subtracts
// its wag offset, so leg i at time t equals leg 0 at time t + offset_i/frequency.
std::array<Vec3, 4> leg_targets(double t, const GaitSpec& spec, const TrajectorySpline& spline);

// Plot export: "phase,lateral,cranial,dorsal" rows at samples_per_period samples.
void dump_trajectory(const TrajectorySpline& spline, std::ostream& os, int samples_per_period = 1000);

}  // namespace quadevo
