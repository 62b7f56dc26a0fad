#include "quadevo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace quadevo {

namespace {

// midranks of the pooled sample, in pooled order
std::vector<double> midranks(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Exact two-sided permutation p over all C(n,n1) assignments via a rank-sum
// count DP. Works in doubled rank units so every quantity stays integral.
double exact_two_sided_p(const std::vector<double>& ranks, std::size_t n1, double u1) {
    const std::size_t n = ranks.size();
    std::vector<long long> r2(n);
    long long total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        r2[i] = std::llround(2.0 * ranks[i]);
        total2 += r2[i];
    }

    // count[j][s]: ways to pick j items with doubled rank-sum s
    std::vector<std::vector<std::uint64_t>> count(n1 + 1,
                                                  std::vector<std::uint64_t>(total2 + 1, 0));
    count[0][0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jmax = std::min(n1, i + 1);
        for (std::size_t j = jmax; j >= 1; --j) {
            for (long long s = total2 - r2[i]; s >= 0; --s) {
                if (count[j - 1][s]) count[j][s + r2[i]] += count[j - 1][s];
            }
        }
    }

    // doubled distance from the mean; 2*U' = s - n1(n1+1), 2*mu = n1*n2
    const long long n1ll = static_cast<long long>(n1);
    const long long n2ll = static_cast<long long>(n - n1);
    const long long d_obs = std::llabs(std::llround(2.0 * u1) - n1ll * n2ll);

    std::uint64_t tail = 0, all = 0;
    for (long long s = 0; s <= total2; ++s) {
        const std::uint64_t c = count[n1][s];
        if (!c) continue;
        all += c;
        const long long d = std::llabs((s - n1ll * (n1ll + 1)) - n1ll * n2ll);
        if (d >= d_obs) tail += c;
    }
    return static_cast<double>(tail) / static_cast<double>(all);
}

constexpr double kT975[] = {
    // two-tailed 0.05 critical values for df = 1..30
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    const std::size_t n = n1 + n2;

    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    const std::vector<double> ranks = midranks(pooled);

    double r1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
    const double u1 = r1 - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);

    MannWhitneyResult res;
    res.u = u1;

    if (n <= 16) {
        res.exact = true;
        res.p = exact_two_sided_p(ranks, n1, u1);
        return res;
    }

    // tie-corrected variance
    double tie_sum = 0.0;
    {
        std::vector<double> sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_sum += t * t * t - t;
            i = j + 1;
        }
    }
    const double nn = static_cast<double>(n);
    const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
    const double var = (static_cast<double>(n1) * static_cast<double>(n2) / 12.0) *
                       ((nn + 1.0) - tie_sum / (nn * (nn - 1.0)));
    if (var <= 0.0) {
        res.p = 1.0;
        return res;
    }
    const double z = std::max(0.0, std::abs(u1 - mu) - 0.5) / std::sqrt(var);
    res.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return res;
}

HolmResult holm_bonferroni(const std::vector<double>& p_values, double alpha) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p-value outside [0,1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    HolmResult res;
    res.adjusted.assign(m, 1.0);
    res.rejected.assign(m, false);

    double running = 0.0;
    bool rejecting = true;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t idx = order[k];
        const double p = p_values[idx];
        running = std::max(running, std::min(1.0, static_cast<double>(m - k) * p));
        res.adjusted[idx] = running;
        if (rejecting && p <= alpha / static_cast<double>(m - k)) {
            res.rejected[idx] = true;
        } else {
            rejecting = false;
        }
    }
    return res;
}

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of empty span");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_std needs >= 2 values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double population_std(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("population_std of empty span");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

double t_interval_halfwidth_95(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) throw std::invalid_argument("t-interval needs >= 2 values");
    const std::size_t df = n - 1;
    const double t = df <= 30 ? kT975[df - 1] : 1.96 + 2.4 / static_cast<double>(df);
    return t * sample_std(v) / std::sqrt(static_cast<double>(n));
}

}  // namespace quadevo
