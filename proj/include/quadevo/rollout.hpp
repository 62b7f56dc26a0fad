#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "quadevo/params.hpp"
#include "quadevo/surface.hpp"
#include "quadevo/vec3.hpp"

namespace quadevo {

// Pose/sensor streams from one surrogate rollout. Position is in meters
// (x lateral, y forward, z height); orientations are roll/pitch/yaw in rad;
// accelerations in m/s^2. All series share the 100 Hz sample grid.
struct EvaluationTrace {
    std::vector<Vec3> positions;
    std::vector<Vec3> orientations;
    std::vector<Vec3> accelerations;
    double t_start = 0.0;
    double t_end = 0.0;

    enum class Termination { distance, timeout };
    Termination terminated_by = Termination::timeout;

    // IK-unreachable command during the rollout; consumers apply the fitness floor
    bool failed = false;
    std::string failure;

    std::size_t size() const { return positions.size(); }
    double net_displacement_m() const {
        return positions.empty() ? 0.0 : (positions.back() - positions.front()).norm();
    }
};

// Tunable constants of the kinematic surrogate. Defaults are the frozen values
// used by the reference surfaces; tests and configs may override.
struct RolloutParams {
    double control_rate_hz = 50.0;
    double sample_rate_hz = 100.0;
    double max_duration_s = 10.0;
    double target_distance_m = 1.0;

    // slip/grip model
    double ref_speed_mm_s = 200.0;

    // servo joint-speed ceiling; stance commands requiring faster joints lose
    // displacement proportionally, so longer legs unlock higher top speed
    double max_joint_speed_rad_s = 0.9;

    // foot sinkage eats step clearance
    double drag_gain = 0.6;
    double drag_floor = 0.3;

    // orientation response
    double orient_omega_rad_s = 15.0;   // critically damped natural frequency
    double tilt_gain_rad = 0.05;        // support-polygon asymmetry while a leg swings
    double wag_gain_rad = 0.05;         // counter-lean from the wag overlay
    double wag_response_lead = 0.10;    // body-response lead of the wag coupling, in cycles
    double sink_pulse_rad_per_mm = 0.0025;
    double rough_pulse_rad_per_mm = 0.0016;
    double yaw_pulse_rad_per_mm = 0.0012;
    double pulse_decay_s = 0.12;
    // taller bodies amplify ground disturbances: ((lf+lt)/base)^exponent
    double height_amp_exponent = 2.0;

    double acc_jitter_per_mm = 0.015;  // m/s^2 of sensor jitter per mm of noise scale
};

// Deterministic surrogate evaluation of a gait on a surface: pure function of
// (spec, surface, seed). Ends at target_distance_m net displacement or
// max_duration_s, whichever comes first.
EvaluationTrace rollout(const GaitSpec& spec, const SurfaceModel& surface, std::uint64_t seed,
                        const RolloutParams& params = {});

// Debug export: one row per sample with position, orientation and acceleration.
void write_trace_csv(const EvaluationTrace& trace, std::ostream& os);

}  // namespace quadevo
