#pragma once

#include <span>
#include <string>
#include <vector>

namespace quadevo {

struct MannWhitneyResult {
    double u = 0.0;  // U statistic of the first sample
    double p = 1.0;  // two-sided
    bool exact = false;
};

// Rank-sum test with midrank tie handling. Exact permutation distribution (over
// all C(n1+n2, n1) group assignments) when n1+n2 <= 16; otherwise the normal
// approximation with tie-corrected variance and continuity correction.
// All-identical pooled values give p = 1.
MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y);

struct HolmResult {
    std::vector<double> adjusted;  // same order as input
    std::vector<bool> rejected;
};

// Step-down Holm-Bonferroni: sort p ascending, reject while p_(i) <= alpha/(m-i);
// adjusted p_(i) = running max of min(1, (m-i)*p_(i)).
HolmResult holm_bonferroni(const std::vector<double>& p_values, double alpha = 0.01);

struct StatResult {
    std::string parameter;
    double u = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

double mean(std::span<const double> v);
double sample_std(std::span<const double> v);   // ddof = 1
double population_std(std::span<const double> v);

// half-width of the 95% t-interval for the mean of v
double t_interval_halfwidth_95(std::span<const double> v);

}  // namespace quadevo
