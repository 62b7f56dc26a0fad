#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadevo {

// 18-dimensional search space: 11 spline-shape values followed by 7 global
// gait/morphology values. Genomes are normalized to [0,1]; decode() maps them
// linearly onto the physical ranges below.
//
// index  name                    range (phenotype)
//  0     ground_front_cranial    [0, 100] mm
//  1     ground_back_cranial     [-150, -50] mm
//  2     air_front_lateral       [-12.5, 12.5] mm
//  3     air_front_cranial       [25, 125] mm
//  4     air_front_dorsal        [19, 41] mm
//  5     air_top_lateral         [-12.5, 12.5] mm
//  6     air_top_cranial         [-30, 30] mm
//  7     air_top_dorsal          [39, 61] mm
//  8     air_back_lateral        [-12.5, 12.5] mm
//  9     air_back_cranial        [-125, -25] mm
// 10     air_back_dorsal         [19, 41] mm
// 11     wag_phase               [-pi/8, pi/8]
// 12     wag_amp_lateral         [0, 14] mm
// 13     wag_amp_cranial         [0, 14] mm
// 14     lift_duration           [0.13, 0.20] (fraction of period)
// 15     frequency               [0.25, 1.0] steps/s
// 16     femur_extension         [0, 50] mm
// 17     tibia_extension         [0, 100] mm

inline constexpr std::size_t kGenomeSize = 18;

struct ParamRange {
    const char* name;
    double lo;
    double hi;
};

const std::array<ParamRange, kGenomeSize>& parameter_ranges();
const std::array<const char*, kGenomeSize>& parameter_names();

struct Genome {
    std::array<double, kGenomeSize> values{};

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    static Genome from_vector(const std::vector<double>& v);
};

struct SplineParams {
    double ground_front_cranial = 0.0;  // lateral and dorsal fixed at 0
    double ground_back_cranial = 0.0;
    double air_front_lateral = 0.0, air_front_cranial = 0.0, air_front_dorsal = 0.0;
    double air_top_lateral = 0.0, air_top_cranial = 0.0, air_top_dorsal = 0.0;
    double air_back_lateral = 0.0, air_back_cranial = 0.0, air_back_dorsal = 0.0;
};

struct GaitParams {
    double wag_phase = 0.0;
    double wag_amp_lateral = 0.0;
    double wag_amp_cranial = 0.0;
    double lift_duration = 0.0;
    double frequency = 0.0;
};

struct MorphologyParams {
    double femur_extension = 0.0;  // shared by all four legs
    double tibia_extension = 0.0;
};

struct GaitSpec {
    SplineParams spline;
    GaitParams gait;
    MorphologyParams morphology;
};

struct Violation {
    std::string field;
    double value;
    double lo;
    double hi;

    std::string to_string() const;
};

class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear map g -> lo + g*(hi-lo) per coordinate. Throws validation_error on an
// out-of-range or non-finite element, naming its index.
GaitSpec decode(const Genome& genome);

// Inverse of decode. Throws validation_error if the spec violates any range.
Genome encode(const GaitSpec& spec);

// Returns one entry per violated range, in schema order. Empty means valid.
std::vector<Violation> validate(const GaitSpec& spec);

// Flatten a spec to the 18 phenotype values in schema order (no range check).
std::array<double, kGenomeSize> to_phenotype_array(const GaitSpec& spec);
GaitSpec from_phenotype_array(const std::array<double, kGenomeSize>& v);

// Serialization used in run logs: 18 comma-separated full-precision decimals.
std::string format_genome(const Genome& g);
Genome parse_genome(const std::string& line);

}  // namespace quadevo
