#include "quadevo/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "quadevo/kinematics.hpp"
#include "quadevo/rng.hpp"
#include "quadevo/spline.hpp"

namespace quadevo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// hash channels for the counter-based noise draws
enum Channel : std::uint64_t { kStepNoise = 1, kYawNoise = 2, kAccJitter = 3 };

double wrap01(double p) {
    double w = p - std::floor(p);
    if (w >= 1.0) w = 0.0;
    return w;
}

struct Axis2 {
    double value = 0.0;
    double rate = 0.0;

    void step(double target, double omega, double dt) {
        const double acc = omega * omega * (target - value) - 2.0 * omega * rate;
        rate += acc * dt;
        value += rate * dt;
    }
};

// raised-cosine weight over the swing window
double swing_bump(double own_phase, double lift) {
    const double start = 1.0 - lift;
    if (own_phase < start) return 0.0;
    const double s = (own_phase - start) / lift;
    const double w = std::sin(3.14159265358979323846 * s);
    return w * w;
}

}  // namespace

EvaluationTrace rollout(const GaitSpec& spec, const SurfaceModel& surface, std::uint64_t seed,
                        const RolloutParams& prm) {
    const TrajectorySpline spline = build_spline(spec);
    const LegGeometry geom = make_leg_geometry(spec.morphology);
    const double stand_h = stand_height_mm(geom);

    const double freq = spec.gait.frequency;
    const double lift = spec.gait.lift_duration;
    const double step_len_mm = spec.spline.ground_front_cranial - spec.spline.ground_back_cranial;
    const double stance_speed_mm_s = step_len_mm * freq / (1.0 - lift);

    // surface response, constant over the rollout
    const double slip = (1.0 - surface.hardness) * (1.0 - 0.5 * surface.friction) *
                        std::clamp(stance_speed_mm_s / prm.ref_speed_mm_s, 0.0, 1.0);
    const double grip = surface.friction * (1.0 - slip);
    const double sink_mm = surface.sinkage_gain * (1.0 - surface.hardness);
    const double apex_mm = spec.spline.air_top_dorsal;
    const double drag = std::clamp(1.0 - prm.drag_gain * sink_mm / apex_mm, prm.drag_floor, 1.0);
    const double noise_scale_mm = surface.noise_gain * surface.roughness;
    const double leg_len = geom.femur_length + geom.tibia_length;
    const double height_amp = std::pow(leg_len / (kFemurBaseMm + kTibiaBaseMm), prm.height_amp_exponent);

    const double dt_ctrl = 1.0 / prm.control_rate_hz;
    const double dt_samp = 1.0 / prm.sample_rate_hz;
    const int substeps = static_cast<int>(std::lround(prm.sample_rate_hz / prm.control_rate_hz));
    const int max_ticks = static_cast<int>(std::lround(prm.max_duration_s * prm.control_rate_hz));

    EvaluationTrace trace;
    trace.t_start = 0.0;

    double forward_m = 0.0;
    const double body_z_m = (stand_h - sink_mm) * 1e-3;
    Axis2 roll, pitch, yaw;
    double pulse_roll = 0.0, pulse_pitch = 0.0, pulse_yaw = 0.0;
    const double pulse_keep = std::exp(-dt_samp / prm.pulse_decay_s);

    std::array<double, 4> prev_phase{};
    std::array<JointAngles, 4> prev_angles{};
    std::array<std::uint64_t, 4> step_count{};

    auto leg_target_hip = [&](double own_phase) {
        Vec3 p = sample_foot(spline, own_phase);
        const WagOffset w = wag_offset(own_phase, spec.gait);
        p.x -= w.lateral;
        p.y -= w.cranial;
        p.z -= stand_h;
        return p;
    };

    auto push_sample = [&](double t) {
        trace.positions.push_back({0.0, forward_m, body_z_m});
        trace.orientations.push_back({roll.value, pitch.value, yaw.value});
        trace.t_end = t;
    };

    // initial pose and IK feasibility at t = 0
    for (int leg = 0; leg < 4; ++leg) {
        prev_phase[leg] = kLegPhaseOffsets[leg];
        const IkResult ik = inverse_kinematics(leg_target_hip(prev_phase[leg]), geom);
        if (!ik.ok()) {
            trace.failed = true;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "leg %d target unreachable at t=0 (shortfall %.3f mm)",
                          leg, ik.shortfall);
            trace.failure = buf;
        } else {
            prev_angles[leg] = *ik.angles;
        }
    }
    push_sample(0.0);
    trace.accelerations.assign(1, Vec3{});
    if (trace.failed) return trace;

    bool done = false;
    for (int tick = 0; tick < max_ticks && !done; ++tick) {
        const double t_next = (tick + 1) * dt_ctrl;

        // commanded joints for this tick; stance legs bound the body advance
        double max_stance_rate = 0.0;
        bool touchdown[4] = {false, false, false, false};
        for (int leg = 0; leg < 4; ++leg) {
            const double phase = wrap01(t_next * freq + kLegPhaseOffsets[leg]);
            const IkResult ik = inverse_kinematics(leg_target_hip(phase), geom);
            if (!ik.ok()) {
                trace.failed = true;
                char buf[96];
                std::snprintf(buf, sizeof(buf), "leg %d target unreachable at t=%.2f (shortfall %.3f mm)",
                              leg, t_next, ik.shortfall);
                trace.failure = buf;
                break;
            }
            const bool was_stance = prev_phase[leg] < 1.0 - lift;
            const bool is_stance = phase < 1.0 - lift;
            if (phase < prev_phase[leg]) {
                touchdown[leg] = true;
                ++step_count[leg];
            }
            if (was_stance && is_stance && !touchdown[leg]) {
                const JointAngles& a = prev_angles[leg];
                const JointAngles& b = *ik.angles;
                const double rate = std::max({std::abs(b.coxa - a.coxa), std::abs(b.femur - a.femur),
                                              std::abs(b.tibia - a.tibia)}) / dt_ctrl;
                max_stance_rate = std::max(max_stance_rate, rate);
            }
            prev_phase[leg] = phase;
            prev_angles[leg] = *ik.angles;
        }
        if (trace.failed) break;

        const double joint_factor =
            max_stance_rate > prm.max_joint_speed_rad_s ? prm.max_joint_speed_rad_s / max_stance_rate : 1.0;
        const double advance_m = step_len_mm * 1e-3 * freq * dt_ctrl * grip * joint_factor * drag;

        // touchdown transients: sink plop plus roughness irregularity, both
        // amplified on longer legs
        for (int leg = 0; leg < 4; ++leg) {
            if (!touchdown[leg]) continue;
            const double sx = geom.hip_positions[leg].x >= 0.0 ? 1.0 : -1.0;
            const double sy = geom.hip_positions[leg].y >= 0.0 ? 1.0 : -1.0;
            const double dh = noise_scale_mm * hashed_gaussian(seed, kStepNoise, leg, step_count[leg]);
            pulse_roll += (prm.sink_pulse_rad_per_mm * sink_mm * sx + prm.rough_pulse_rad_per_mm * dh * sx) * height_amp;
            pulse_pitch += (prm.sink_pulse_rad_per_mm * sink_mm * sy + prm.rough_pulse_rad_per_mm * dh * sy) * height_amp;
            pulse_yaw += prm.yaw_pulse_rad_per_mm * noise_scale_mm *
                         hashed_gaussian(seed, kYawNoise, leg, step_count[leg]) * height_amp;
        }

        for (int sub = 0; sub < substeps && !done; ++sub) {
            const double t = tick * dt_ctrl + (sub + 1) * dt_samp;
            const double gphase = wrap01(t * freq);

            // support-polygon asymmetry from whichever leg is airborne
            double dist_roll = 0.0, dist_pitch = 0.0;
            for (int leg = 0; leg < 4; ++leg) {
                const double p = wrap01(gphase + kLegPhaseOffsets[leg]);
                const double w = swing_bump(p, lift);
                if (w > 0.0) {
                    dist_roll += w * (geom.hip_positions[leg].x >= 0.0 ? 1.0 : -1.0);
                    dist_pitch += w * (geom.hip_positions[leg].y >= 0.0 ? 1.0 : -1.0);
                }
            }
            // counter-lean from the wag: couples to the sway rate, so a well-phased
            // wag cancels the swing disturbance
            const double shifted = gphase + spec.gait.wag_phase / kTwoPi + prm.wag_response_lead;
            const double wag_roll = prm.wag_gain_rad * (spec.gait.wag_amp_lateral / 14.0) *
                                    std::cos(kTwoPi * shifted);
            const double wag_pitch = -prm.wag_gain_rad * (spec.gait.wag_amp_cranial / 14.0) *
                                     std::cos(2.0 * kTwoPi * shifted);

            pulse_roll *= pulse_keep;
            pulse_pitch *= pulse_keep;
            pulse_yaw *= pulse_keep;

            roll.step(prm.tilt_gain_rad * dist_roll + wag_roll + pulse_roll, prm.orient_omega_rad_s, dt_samp);
            pitch.step(prm.tilt_gain_rad * dist_pitch + wag_pitch + pulse_pitch, prm.orient_omega_rad_s, dt_samp);
            yaw.step(pulse_yaw, prm.orient_omega_rad_s, dt_samp);

            forward_m += advance_m / substeps;
            push_sample(t);
            if (forward_m >= prm.target_distance_m) {
                trace.terminated_by = EvaluationTrace::Termination::distance;
                done = true;
            }
        }
    }

    // linear acceleration: second difference of position, plus terrain jitter
    const std::size_t n = trace.positions.size();
    trace.accelerations.assign(n, Vec3{});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        trace.accelerations[i] =
            (trace.positions[i + 1] - 2.0 * trace.positions[i] + trace.positions[i - 1]) /
            (dt_samp * dt_samp);
    }
    if (n >= 3) {
        trace.accelerations[0] = trace.accelerations[1];
        trace.accelerations[n - 1] = trace.accelerations[n - 2];
    }
    const double jitter = prm.acc_jitter_per_mm * noise_scale_mm;
    if (jitter > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            trace.accelerations[i].x += jitter * hashed_gaussian(seed, kAccJitter, i, 0);
            trace.accelerations[i].y += jitter * hashed_gaussian(seed, kAccJitter, i, 1);
            trace.accelerations[i].z += jitter * hashed_gaussian(seed, kAccJitter, i, 2);
        }
    }

    return trace;
}

void write_trace_csv(const EvaluationTrace& trace, std::ostream& os) {
    os << "# quadevo-trace v1\n";
    os << "t,pos_lateral,pos_forward,pos_height,roll,pitch,yaw,acc_x,acc_y,acc_z\n";
    char buf[256];
    const double dt = trace.size() > 1 ? (trace.t_end - trace.t_start) / (trace.size() - 1) : 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Vec3& p = trace.positions[i];
        const Vec3& o = trace.orientations[i];
        const Vec3& a = trace.accelerations[i];
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      trace.t_start + i * dt, p.x, p.y, p.z, o.x, o.y, o.z, a.x, a.y, a.z);
        os << buf;
    }
}

}  // namespace quadevo
