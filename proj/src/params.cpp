#include "quadevo/params.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace quadevo {

namespace {

constexpr double kWagPhaseBound = 0.39269908169872414;  // pi/8

constexpr std::array<ParamRange, kGenomeSize> kRanges = {{
    {"ground_front_cranial", 0.0, 100.0},
    {"ground_back_cranial", -150.0, -50.0},
    {"air_front_lateral", -12.5, 12.5},
    {"air_front_cranial", 25.0, 125.0},
    {"air_front_dorsal", 19.0, 41.0},
    {"air_top_lateral", -12.5, 12.5},
    {"air_top_cranial", -30.0, 30.0},
    {"air_top_dorsal", 39.0, 61.0},
    {"air_back_lateral", -12.5, 12.5},
    {"air_back_cranial", -125.0, -25.0},
    {"air_back_dorsal", 19.0, 41.0},
    {"wag_phase", -kWagPhaseBound, kWagPhaseBound},
    {"wag_amp_lateral", 0.0, 14.0},
    {"wag_amp_cranial", 0.0, 14.0},
    {"lift_duration", 0.13, 0.20},
    {"frequency", 0.25, 1.0},
    {"femur_extension", 0.0, 50.0},
    {"tibia_extension", 0.0, 100.0},
}};

}  // namespace

const std::array<ParamRange, kGenomeSize>& parameter_ranges() { return kRanges; }

const std::array<const char*, kGenomeSize>& parameter_names() {
    static const std::array<const char*, kGenomeSize> names = [] {
        std::array<const char*, kGenomeSize> n{};
        for (std::size_t i = 0; i < kGenomeSize; ++i) n[i] = kRanges[i].name;
        return n;
    }();
    return names;
}

Genome Genome::from_vector(const std::vector<double>& v) {
    if (v.size() != kGenomeSize) {
        throw validation_error("genome has " + std::to_string(v.size()) +
                               " values, expected " + std::to_string(kGenomeSize));
    }
    Genome g;
    for (std::size_t i = 0; i < kGenomeSize; ++i) g.values[i] = v[i];
    return g;
}

std::string Violation::to_string() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s = %.9g outside [%.9g, %.9g]", field.c_str(), value, lo, hi);
    return buf;
}

GaitSpec decode(const Genome& genome) {
    std::array<double, kGenomeSize> phen{};
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        const double g = genome.values[i];
        if (!std::isfinite(g) || g < 0.0 || g > 1.0) {
            throw validation_error("genome element " + std::to_string(i) + " (" +
                                   kRanges[i].name + ") = " + std::to_string(g) +
                                   " outside [0, 1]");
        }
        phen[i] = kRanges[i].lo + g * (kRanges[i].hi - kRanges[i].lo);
    }
    return from_phenotype_array(phen);
}

Genome encode(const GaitSpec& spec) {
    const auto violations = validate(spec);
    if (!violations.empty()) {
        throw validation_error("cannot encode out-of-range spec: " + violations.front().to_string());
    }
    const auto phen = to_phenotype_array(spec);
    Genome g;
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        g.values[i] = (phen[i] - kRanges[i].lo) / (kRanges[i].hi - kRanges[i].lo);
    }
    return g;
}

std::vector<Violation> validate(const GaitSpec& spec) {
    const auto phen = to_phenotype_array(spec);
    std::vector<Violation> out;
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        const double v = phen[i];
        if (!std::isfinite(v) || v < kRanges[i].lo || v > kRanges[i].hi) {
            out.push_back({kRanges[i].name, v, kRanges[i].lo, kRanges[i].hi});
        }
    }
    return out;
}

std::array<double, kGenomeSize> to_phenotype_array(const GaitSpec& s) {
    return {s.spline.ground_front_cranial,
            s.spline.ground_back_cranial,
            s.spline.air_front_lateral,
            s.spline.air_front_cranial,
            s.spline.air_front_dorsal,
            s.spline.air_top_lateral,
            s.spline.air_top_cranial,
            s.spline.air_top_dorsal,
            s.spline.air_back_lateral,
            s.spline.air_back_cranial,
            s.spline.air_back_dorsal,
            s.gait.wag_phase,
            s.gait.wag_amp_lateral,
            s.gait.wag_amp_cranial,
            s.gait.lift_duration,
            s.gait.frequency,
            s.morphology.femur_extension,
            s.morphology.tibia_extension};
}

GaitSpec from_phenotype_array(const std::array<double, kGenomeSize>& v) {
    GaitSpec s;
    s.spline.ground_front_cranial = v[0];
    s.spline.ground_back_cranial = v[1];
    s.spline.air_front_lateral = v[2];
    s.spline.air_front_cranial = v[3];
    s.spline.air_front_dorsal = v[4];
    s.spline.air_top_lateral = v[5];
    s.spline.air_top_cranial = v[6];
    s.spline.air_top_dorsal = v[7];
    s.spline.air_back_lateral = v[8];
    s.spline.air_back_cranial = v[9];
    s.spline.air_back_dorsal = v[10];
    s.gait.wag_phase = v[11];
    s.gait.wag_amp_lateral = v[12];
    s.gait.wag_amp_cranial = v[13];
    s.gait.lift_duration = v[14];
    s.gait.frequency = v[15];
    s.morphology.femur_extension = v[16];
    s.morphology.tibia_extension = v[17];
    return s;
}

std::string format_genome(const Genome& g) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", g.values[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

Genome parse_genome(const std::string& line) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw validation_error("genome record has non-numeric value '" + tok + "'");
        }
    }
    return Genome::from_vector(vals);
}

}  // namespace quadevo
