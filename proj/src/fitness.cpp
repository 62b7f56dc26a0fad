#include "quadevo/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadevo {

namespace {

double population_std(const std::vector<Vec3>& series, double Vec3::* axis) {
    const std::size_t n = series.size();
    double mean = 0.0;
    for (const auto& v : series) mean += v.*axis;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& v : series) {
        const double d = v.*axis - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n));
}

}  // namespace

double speed_fitness(const EvaluationTrace& trace) {
    const double duration = trace.t_end - trace.t_start;
    if (!(duration > 0.0) || trace.positions.empty()) {
        throw std::invalid_argument("speed_fitness: trace has no duration");
    }
    return trace.net_displacement_m() * 60.0 / duration;
}

double stability_fitness_raw(const EvaluationTrace& trace, const FitnessConfig& cfg) {
    if (trace.orientations.empty() || trace.accelerations.empty()) {
        throw std::invalid_argument("stability_fitness: empty trace series");
    }
    double sum = 0.0;
    for (double Vec3::* axis : {&Vec3::x, &Vec3::y, &Vec3::z}) {
        sum += cfg.alpha * population_std(trace.accelerations, axis);
        sum += population_std(trace.orientations, axis);
    }
    return -sum;
}

double stability_fitness(const EvaluationTrace& trace, const FitnessConfig& cfg) {
    const double raw = stability_fitness_raw(trace, cfg);
    return std::clamp(raw * cfg.stability_scale, -1.0, 0.0);
}

Fitness evaluate(const GaitSpec& spec, const SurfaceModel& surface, std::uint64_t seed,
                 const FitnessConfig& cfg) {
    const EvaluationTrace trace = rollout(spec, surface, seed, cfg.rollout);
    if (trace.failed) return kFailedFitness;
    return {speed_fitness(trace), stability_fitness(trace, cfg)};
}

}  // namespace quadevo
