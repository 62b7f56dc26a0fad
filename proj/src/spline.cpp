#include "quadevo/spline.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace quadevo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_phase(double p) {
    double w = p - std::floor(p);
    if (w >= 1.0) w = 0.0;
    return w;
}

// Hermite segment between knots a and b of the spline, local parameter t in [0,1].
Vec3 hermite(const Vec3& p0, const Vec3& m0, const Vec3& p1, const Vec3& m1, double dphi, double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * p0 + (h10 * dphi) * m0 + h01 * p1 + (h11 * dphi) * m1;
}

Vec3 hermite_velocity(const Vec3& p0, const Vec3& m0, const Vec3& p1, const Vec3& m1, double dphi, double t) {
    const double t2 = t * t;
    const double d00 = (6.0 * t2 - 6.0 * t) / dphi;
    const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double d01 = (-6.0 * t2 + 6.0 * t) / dphi;
    const double d11 = 3.0 * t2 - 2.0 * t;
    return d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1;
}

int find_segment(const TrajectorySpline& s, double phase) {
    // segments: [phi0,phi1) stance, [phi1,phi2), [phi2,phi3), [phi3,phi4), [phi4,1)
    for (int i = 4; i >= 1; --i) {
        if (phase >= s.knot_phases[i]) return i;
    }
    return 0;
}

}  // namespace

TrajectorySpline build_spline(const GaitSpec& spec) {
    const auto& sp = spec.spline;

    TrajectorySpline s;
    s.knots[0] = {0.0, sp.ground_front_cranial, 0.0};
    s.knots[1] = {0.0, sp.ground_back_cranial, 0.0};
    s.knots[2] = {sp.air_back_lateral, sp.air_back_cranial, sp.air_back_dorsal};
    s.knots[3] = {sp.air_top_lateral, sp.air_top_cranial, sp.air_top_dorsal};
    s.knots[4] = {sp.air_front_lateral, sp.air_front_cranial, sp.air_front_dorsal};
    s.period_s = 1.0 / spec.gait.frequency;

    const double step_length = sp.ground_front_cranial - sp.ground_back_cranial;
    if (!(step_length > 1e-9)) {
        throw std::logic_error("degenerate gait spec: ground control points coincide");
    }

    const double lift = spec.gait.lift_duration;
    const double stance_end = 1.0 - lift;
    s.knot_phases[0] = 0.0;
    s.knot_phases[1] = stance_end;

    // Swing sub-segments gb->ab->at->af->gf share the lift window proportionally
    // to chord length, so asymmetric shapes keep comparable traversal speed.
    std::array<double, 4> chord{};
    chord[0] = distance(s.knots[2], s.knots[1]);
    chord[1] = distance(s.knots[3], s.knots[2]);
    chord[2] = distance(s.knots[4], s.knots[3]);
    chord[3] = distance(s.knots[0], s.knots[4]);
    double total = 0.0;
    for (auto& c : chord) {
        c = std::max(c, 1e-9);
        total += c;
    }
    s.knot_phases[2] = stance_end + lift * chord[0] / total;
    s.knot_phases[3] = stance_end + lift * (chord[0] + chord[1]) / total;
    s.knot_phases[4] = stance_end + lift * (chord[0] + chord[1] + chord[2]) / total;

    // Ground knots carry the stance slope; air knots use closed Catmull-Rom.
    const Vec3 stance_slope = (s.knots[1] - s.knots[0]) / stance_end;
    s.tangents[0] = stance_slope;
    s.tangents[1] = stance_slope;
    s.tangents[2] = (s.knots[3] - s.knots[1]) / (s.knot_phases[3] - s.knot_phases[1]);
    s.tangents[3] = (s.knots[4] - s.knots[2]) / (s.knot_phases[4] - s.knot_phases[2]);
    s.tangents[4] = (s.knots[0] - s.knots[3]) / (1.0 + s.knot_phases[0] - s.knot_phases[3]);

    return s;
}

Vec3 sample_foot(const TrajectorySpline& s, double phase) {
    if (!(phase >= 0.0 && phase < 1.0)) {
        throw std::domain_error("spline phase must be in [0,1)");
    }
    const int seg = find_segment(s, phase);
    if (seg == 0) {
        // stance: straight line at constant velocity, stays in the ground plane
        const double t = phase / s.knot_phases[1];
        return s.knots[0] + t * (s.knots[1] - s.knots[0]);
    }
    const int next = (seg + 1) % 5;
    const double phi0 = s.knot_phases[seg];
    const double phi1 = (seg == 4) ? 1.0 : s.knot_phases[next];
    const double dphi = phi1 - phi0;
    const double t = (phase - phi0) / dphi;
    return hermite(s.knots[seg], s.tangents[seg], s.knots[next], s.tangents[next], dphi, t);
}

Vec3 sample_foot_wrapped(const TrajectorySpline& s, double phase) {
    return sample_foot(s, wrap_phase(phase));
}

Vec3 sample_foot_velocity(const TrajectorySpline& s, double phase) {
    if (!(phase >= 0.0 && phase < 1.0)) {
        throw std::domain_error("spline phase must be in [0,1)");
    }
    const int seg = find_segment(s, phase);
    if (seg == 0) {
        return (s.knots[1] - s.knots[0]) / s.knot_phases[1];
    }
    const int next = (seg + 1) % 5;
    const double phi0 = s.knot_phases[seg];
    const double phi1 = (seg == 4) ? 1.0 : s.knot_phases[next];
    const double dphi = phi1 - phi0;
    const double t = (phase - phi0) / dphi;
    return hermite_velocity(s.knots[seg], s.tangents[seg], s.knots[next], s.tangents[next], dphi, t);
}

WagOffset wag_offset(double phase, const GaitParams& gait) {
    const double shifted = phase + gait.wag_phase / kTwoPi;
    return {gait.wag_amp_lateral * std::sin(kTwoPi * shifted),
            gait.wag_amp_cranial * std::sin(2.0 * kTwoPi * shifted)};
}

std::array<Vec3, 4> leg_targets(double t, const GaitSpec& spec, const TrajectorySpline& spline) {
    std::array<Vec3, 4> out{};
    for (int leg = 0; leg < 4; ++leg) {
        const double phase = wrap_phase(t * spec.gait.frequency + kLegPhaseOffsets[leg]);
        Vec3 p = sample_foot(spline, phase);
        const WagOffset w = wag_offset(phase, spec.gait);
        p.x -= w.lateral;
        p.y -= w.cranial;
        out[leg] = p;
    }
    return out;
}

void dump_trajectory(const TrajectorySpline& spline, std::ostream& os, int samples_per_period) {
    os << "phase,lateral,cranial,dorsal\n";
    char buf[128];
    for (int i = 0; i < samples_per_period; ++i) {
        const double phase = static_cast<double>(i) / samples_per_period;
        const Vec3 p = sample_foot(spline, phase);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", phase, p.x, p.y, p.z);
        os << buf;
    }
}

}  // namespace quadevo
