#include "quadevo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "quadevo/spline.hpp"

namespace quadevo {

namespace {

bool point_dominates(double ax, double ay, double bx, double by) {
    return ax >= bx && ay >= by && (ax > bx || ay > by);
}

}  // namespace

FrontSnapshot pareto_front(std::span<const RunRecord> records) {
    if (records.empty()) throw std::invalid_argument("pareto_front: no records");

    FrontSnapshot snap;
    snap.eval_count = static_cast<int>(records.size());

    std::vector<const RunRecord*> kept;
    for (const auto& r : records) {
        bool dominated = false;
        for (const auto& o : records) {
            if (dominates(o.fitness, r.fitness)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        // collapse exact fitness duplicates to the earliest evaluation
        bool duplicate = false;
        for (const auto* k : kept) {
            if (k->fitness.speed == r.fitness.speed && k->fitness.stability == r.fitness.stability) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(&r);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const RunRecord* a, const RunRecord* b) { return a->eval_index < b->eval_index; });
    for (const auto* r : kept) {
        snap.points.push_back({r->fitness.speed, r->fitness.stability, r->eval_index, r->genome});
    }
    return snap;
}

double hypervolume_2d(std::vector<std::pair<double, double>> points, double ref_speed,
                      double ref_stability) {
    if (points.empty()) return 0.0;
    for (auto& p : points) {
        p.first = std::max(p.first, ref_speed);
        p.second = std::max(p.second, ref_stability);
    }
    // non-dominated filter plus dedupe of clamped points
    std::vector<std::pair<double, double>> front;
    for (const auto& p : points) {
        bool keep = true;
        for (const auto& q : points) {
            if (point_dominates(q.first, q.second, p.first, p.second)) {
                keep = false;
                break;
            }
        }
        if (keep && std::find(front.begin(), front.end(), p) == front.end()) front.push_back(p);
    }
    std::sort(front.begin(), front.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    double hv = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double next_speed = i + 1 < front.size() ? front[i + 1].first : ref_speed;
        hv += (front[i].first - next_speed) * (front[i].second - ref_stability);
    }
    return hv;
}

double hypervolume_2d(const FrontSnapshot& front, double ref_speed, double ref_stability) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(front.points.size());
    for (const auto& p : front.points) pts.emplace_back(p.speed, p.stability);
    return hypervolume_2d(std::move(pts), ref_speed, ref_stability);
}

std::vector<std::pair<int, double>> hypervolume_convergence(std::span<const RunRecord> records,
                                                            int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    std::vector<std::pair<int, double>> series;
    std::vector<std::pair<double, double>> front;  // running non-dominated set

    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::pair<double, double> p{records[i].fitness.speed, records[i].fitness.stability};
        bool dominated = false;
        for (const auto& q : front) {
            if (point_dominates(q.first, q.second, p.first, p.second) || q == p) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            std::erase_if(front, [&](const auto& q) {
                return point_dominates(p.first, p.second, q.first, q.second);
            });
            front.push_back(p);
        }
        const int count = static_cast<int>(i) + 1;
        if (count % stride == 0 || i + 1 == records.size()) {
            series.emplace_back(count, hypervolume_2d(front));
        }
    }
    return series;
}

std::vector<StatResult> parameter_significance(std::span<const Genome> group_a,
                                               std::span<const Genome> group_b, double alpha) {
    if (group_a.empty() || group_b.empty()) {
        throw std::invalid_argument("parameter_significance: empty group");
    }
    auto phenotypes = [](std::span<const Genome> group) {
        std::vector<std::array<double, kGenomeSize>> out;
        out.reserve(group.size());
        for (const auto& g : group) out.push_back(to_phenotype_array(decode(g)));
        return out;
    };
    const auto pa = phenotypes(group_a);
    const auto pb = phenotypes(group_b);

    std::vector<StatResult> results(kGenomeSize);
    std::vector<double> p_values(kGenomeSize);
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        std::vector<double> xa, xb;
        xa.reserve(pa.size());
        xb.reserve(pb.size());
        for (const auto& v : pa) xa.push_back(v[i]);
        for (const auto& v : pb) xb.push_back(v[i]);
        const MannWhitneyResult mw = mann_whitney_u(xa, xb);
        results[i].parameter = parameter_names()[i];
        results[i].u = mw.u;
        results[i].p_raw = mw.p;
        p_values[i] = mw.p;
    }
    const HolmResult holm = holm_bonferroni(p_values, alpha);
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        results[i].p_adjusted = holm.adjusted[i];
        results[i].significant = holm.rejected[i];
    }
    return results;
}

double DistanceMatrix::at(const std::string& s1, const std::string& s2) const {
    const auto i1 = std::find(surfaces.begin(), surfaces.end(), s1);
    const auto i2 = std::find(surfaces.begin(), surfaces.end(), s2);
    if (i1 == surfaces.end() || i2 == surfaces.end()) {
        throw std::invalid_argument("unknown surface in distance matrix lookup");
    }
    return distances[i1 - surfaces.begin()][i2 - surfaces.begin()];
}

DistanceMatrix distance_matrix(const std::vector<ReevalRecord>& rows) {
    if (rows.empty()) throw std::invalid_argument("distance_matrix: no rows");

    std::set<std::string> surface_set;
    for (const auto& r : rows) surface_set.insert(r.eval_surface);
    const std::vector<std::string> surfaces(surface_set.begin(), surface_set.end());

    // pooled min-max normalization of both objectives
    double sp_lo = rows.front().fitness.speed, sp_hi = sp_lo;
    double st_lo = rows.front().fitness.stability, st_hi = st_lo;
    for (const auto& r : rows) {
        sp_lo = std::min(sp_lo, r.fitness.speed);
        sp_hi = std::max(sp_hi, r.fitness.speed);
        st_lo = std::min(st_lo, r.fitness.stability);
        st_hi = std::max(st_hi, r.fitness.stability);
    }
    auto norm = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; };

    // per (individual, surface) mean of normalized performance
    struct Acc {
        double speed = 0.0, stability = 0.0;
        int n = 0;
    };
    std::map<std::string, std::map<std::string, Acc>> per_individual;
    for (const auto& r : rows) {
        Acc& acc = per_individual[r.individual_id][r.eval_surface];
        acc.speed += norm(r.fitness.speed, sp_lo, sp_hi);
        acc.stability += norm(r.fitness.stability, st_lo, st_hi);
        ++acc.n;
    }
    for (const auto& [id, by_surface] : per_individual) {
        for (const auto& s : surfaces) {
            if (!by_surface.count(s)) {
                throw std::invalid_argument("individual " + id + " has no evaluations on surface " + s);
            }
        }
    }

    DistanceMatrix dm;
    dm.surfaces = surfaces;
    const std::size_t k = surfaces.size();
    dm.distances.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double sum = 0.0;
            for (const auto& [id, by_surface] : per_individual) {
                const Acc& a = by_surface.at(surfaces[i]);
                const Acc& b = by_surface.at(surfaces[j]);
                const double dx = a.speed / a.n - b.speed / b.n;
                const double dy = a.stability / a.n - b.stability / b.n;
                sum += std::sqrt(dx * dx + dy * dy);
            }
            dm.distances[i][j] = dm.distances[j][i] = sum / static_cast<double>(per_individual.size());
        }
    }
    return dm;
}

std::vector<Vec3> mean_spline(std::span<const GaitSpec> specs, int samples_per_period) {
    if (specs.empty()) throw std::invalid_argument("mean_spline: no specs");
    std::vector<Vec3> acc(samples_per_period);
    for (const auto& spec : specs) {
        const TrajectorySpline spline = build_spline(spec);
        for (int i = 0; i < samples_per_period; ++i) {
            acc[i] += sample_foot(spline, static_cast<double>(i) / samples_per_period);
        }
    }
    for (auto& v : acc) v = v / static_cast<double>(specs.size());
    return acc;
}

double Kde2D::density(double x, double y) const {
    const double inv_norm =
        1.0 / (samples.size() * bandwidth_x * bandwidth_y * 6.283185307179586476925286766559);
    double sum = 0.0;
    for (const auto& s : samples) {
        const double dx = (x - s[0]) / bandwidth_x;
        const double dy = (y - s[1]) / bandwidth_y;
        sum += std::exp(-0.5 * (dx * dx + dy * dy));
    }
    return sum * inv_norm;
}

Kde2D kde_scott(std::span<const std::array<double, 2>> samples) {
    if (samples.size() < 2) throw std::invalid_argument("kde_scott needs at least 2 samples");
    std::vector<double> xs, ys;
    xs.reserve(samples.size());
    ys.reserve(samples.size());
    for (const auto& s : samples) {
        xs.push_back(s[0]);
        ys.push_back(s[1]);
    }
    const double sx = sample_std(xs);
    const double sy = sample_std(ys);
    if (sx <= 0.0 || sy <= 0.0) {
        throw std::invalid_argument("kde_scott: zero-variance dimension; jitter the samples");
    }
    const double factor = std::pow(static_cast<double>(samples.size()), -1.0 / 6.0);  // d = 2
    Kde2D kde;
    kde.bandwidth_x = sx * factor;
    kde.bandwidth_y = sy * factor;
    kde.samples.assign(samples.begin(), samples.end());
    return kde;
}

double KdeGrid::integral() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * cell_dx() * cell_dy();
}

KdeGrid kde_grid(const Kde2D& kde, int nx, int ny, double pad_sigmas) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("kde_grid: grid too small");
    KdeGrid grid;
    grid.nx = nx;
    grid.ny = ny;
    double x_lo = kde.samples.front()[0], x_hi = x_lo;
    double y_lo = kde.samples.front()[1], y_hi = y_lo;
    for (const auto& s : kde.samples) {
        x_lo = std::min(x_lo, s[0]);
        x_hi = std::max(x_hi, s[0]);
        y_lo = std::min(y_lo, s[1]);
        y_hi = std::max(y_hi, s[1]);
    }
    grid.x_min = x_lo - pad_sigmas * kde.bandwidth_x;
    grid.x_max = x_hi + pad_sigmas * kde.bandwidth_x;
    grid.y_min = y_lo - pad_sigmas * kde.bandwidth_y;
    grid.y_max = y_hi + pad_sigmas * kde.bandwidth_y;
    grid.values.resize(static_cast<std::size_t>(nx) * ny);
    const double dx = grid.cell_dx();
    const double dy = grid.cell_dy();
    for (int iy = 0; iy < ny; ++iy) {
        const double y = grid.y_min + (iy + 0.5) * dy;
        for (int ix = 0; ix < nx; ++ix) {
            const double x = grid.x_min + (ix + 0.5) * dx;
            grid.values[static_cast<std::size_t>(iy) * nx + ix] = kde.density(x, y);
        }
    }
    return grid;
}

}  // namespace quadevo
