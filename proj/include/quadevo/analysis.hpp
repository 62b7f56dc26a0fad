#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quadevo/params.hpp"
#include "quadevo/runlog.hpp"
#include "quadevo/stats.hpp"
#include "quadevo/vec3.hpp"

namespace quadevo {

struct FrontPoint {
    double speed = 0.0;
    double stability = 0.0;
    int eval_index = 0;
    Genome genome;
};

// Mutually non-dominating set extracted from evaluated records.
struct FrontSnapshot {
    int eval_count = 0;
    std::vector<FrontPoint> points;
};

// Maximal non-dominated subset under (speed up, stability up). Exact duplicate
// fitness pairs collapse to the record with the lowest eval_index.
FrontSnapshot pareto_front(std::span<const RunRecord> records);

// Dominated area between the front staircase and the reference point,
// default (speed 0, stability -1). Coordinates at or below the reference
// contribute their clamped rectangle; an empty front gives 0.
double hypervolume_2d(std::vector<std::pair<double, double>> points, double ref_speed = 0.0,
                      double ref_stability = -1.0);
double hypervolume_2d(const FrontSnapshot& front, double ref_speed = 0.0,
                      double ref_stability = -1.0);

// (eval_count, hypervolume of the cumulative front) at every `stride`
// evaluations plus the final count. Non-decreasing by construction.
std::vector<std::pair<int, double>> hypervolume_convergence(std::span<const RunRecord> records,
                                                            int stride);

// Mann-Whitney per parameter on phenotype-scaled values with Holm-Bonferroni
// across the 18 tests; results in genome schema order.
std::vector<StatResult> parameter_significance(std::span<const Genome> group_a,
                                               std::span<const Genome> group_b,
                                               double alpha = 0.01);

struct DistanceMatrix {
    std::vector<std::string> surfaces;            // sorted
    std::vector<std::vector<double>> distances;   // symmetric, zero diagonal

    double at(const std::string& s1, const std::string& s2) const;
};

// Table of mean normalized Euclidean distances between per-surface mean
// performances: speed/stability are min-max normalized over the pooled rows,
// averaged per (individual, surface), then distances averaged over individuals.
// Throws if some individual lacks coverage of a surface.
DistanceMatrix distance_matrix(const std::vector<ReevalRecord>& rows);

// Per-phase arithmetic mean of the built foot trajectories (1000-sample grid).
std::vector<Vec3> mean_spline(std::span<const GaitSpec> specs, int samples_per_period = 1000);

// Gaussian product-kernel density with Scott's rule bandwidth
// h_d = std_d * n^(-1/(d+4)), d = 2.
struct Kde2D {
    double bandwidth_x = 0.0;
    double bandwidth_y = 0.0;
    std::vector<std::array<double, 2>> samples;

    double density(double x, double y) const;
};

Kde2D kde_scott(std::span<const std::array<double, 2>> samples);

struct KdeGrid {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;  // row-major, cell centers

    double cell_dx() const { return (x_max - x_min) / nx; }
    double cell_dy() const { return (y_max - y_min) / ny; }
    double integral() const;
};

// Evaluates the density on a grid padded by pad_sigmas bandwidths around the data.
KdeGrid kde_grid(const Kde2D& kde, int nx = 100, int ny = 100, double pad_sigmas = 3.0);

}  // namespace quadevo
