#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "quadevo/analysis.hpp"
#include "quadevo/spline.hpp"

using namespace quadevo;

namespace {

std::vector<RunRecord> make_records(const std::vector<std::pair<double, double>>& fits) {
    std::vector<RunRecord> recs(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
        recs[i].eval_index = static_cast<int>(i);
        recs[i].fitness = {fits[i].first, fits[i].second};
    }
    return recs;
}

ReevalRecord rrow(const std::string& id, const std::string& surface, double speed, double stab) {
    ReevalRecord r;
    r.individual_id = id;
    r.training_surface = "A";
    r.eval_surface = surface;
    r.fitness = {speed, stab};
    return r;
}

}  // namespace

TEST_CASE("pareto front of one record is that record") {
    const auto recs = make_records({{4.0, -0.4}});
    const FrontSnapshot f = pareto_front(recs);
    REQUIRE(f.points.size() == 1);
    CHECK(f.points[0].speed == 4.0);
    CHECK(f.eval_count == 1);
}

TEST_CASE("dominated records are filtered") {
    const auto recs = make_records({{10.0, -0.2}, {12.0, -0.1}});
    const FrontSnapshot f = pareto_front(recs);
    REQUIRE(f.points.size() == 1);
    CHECK(f.points[0].speed == 12.0);
    CHECK(f.points[0].stability == -0.1);
}

TEST_CASE("exact duplicates collapse to the earliest evaluation") {
    const auto recs = make_records({{5.0, -0.5}, {5.0, -0.5}, {4.0, -0.4}});
    const FrontSnapshot f = pareto_front(recs);
    std::set<int> indices;
    for (const auto& p : f.points) indices.insert(p.eval_index);
    CHECK(indices == std::set<int>{0, 2});
}

TEST_CASE("front matches the brute-force non-dominated filter") {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<std::pair<double, double>> fits(100);
        for (auto& f : fits) f = {12.0 * u(rng), -u(rng)};
        const auto recs = make_records(fits);
        const FrontSnapshot front = pareto_front(recs);
        const auto expected = oracle::nondominated_filter(fits);
        std::set<int> got;
        for (const auto& p : front.points) got.insert(p.eval_index);
        CHECK(got == std::set<int>(expected.begin(), expected.end()));
        for (const auto& a : front.points) {
            for (const auto& b : front.points) {
                CHECK(!oracle::dominates_pair({a.speed, a.stability}, {b.speed, b.stability}));
            }
        }
    }
}

TEST_CASE("hypervolume of a single point is its rectangle") {
    CHECK(hypervolume_2d({{10.0, -0.5}}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(hypervolume_2d(std::vector<std::pair<double, double>>{}) == 0.0);
}

TEST_CASE("points at or below the reference contribute their clamped rectangle") {
    CHECK(hypervolume_2d({{10.0, -1.5}}) == 0.0);
    CHECK(hypervolume_2d({{-2.0, -0.5}}) == 0.0);
    CHECK(hypervolume_2d({{4.0, -1.5}, {2.0, -0.5}}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hypervolume is invariant to permutations and dominated insertions") {
    std::mt19937_64 rng(82);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<std::pair<double, double>> pts(10);
        for (auto& p : pts) p = {10.0 * u(rng), -u(rng)};
        const double base = hypervolume_2d(pts);

        std::shuffle(pts.begin(), pts.end(), rng);
        CHECK(hypervolume_2d(pts) == doctest::Approx(base).epsilon(1e-12));

        auto with_dominated = pts;
        with_dominated.push_back({pts[0].first * 0.5, pts[0].second - 0.1});
        CHECK(hypervolume_2d(with_dominated) == doctest::Approx(base).epsilon(1e-12));

        auto with_better = pts;
        with_better.push_back({11.0, -0.05});
        CHECK(hypervolume_2d(with_better) >= base - 1e-12);
    }
}

TEST_CASE("hypervolume agrees with the grid indicator oracle") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::pair<double, double>> pts(15);
        double max_speed = 0.0;
        for (auto& p : pts) {
            p = {0.5 + 11.5 * u(rng), -0.95 * u(rng) - 0.02};
            max_speed = std::max(max_speed, p.first);
        }
        const double fast = hypervolume_2d(pts);
        const double grid = oracle::grid_hypervolume(pts, 0.0, -1.0, max_speed, 0.0, 2000);
        CHECK(std::abs(fast - grid) < 0.005 * fast);
    }
}

TEST_CASE("convergence series is monotone and ends at the full-log value") {
    std::mt19937_64 rng(84);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> fits(137);
    for (auto& f : fits) f = {10.0 * u(rng), -u(rng)};
    const auto recs = make_records(fits);
    const auto series = hypervolume_convergence(recs, 8);
    REQUIRE(!series.empty());
    for (std::size_t i = 1; i < series.size(); ++i) {
        CHECK(series[i].second >= series[i - 1].second - 1e-12);
        CHECK(series[i].first > series[i - 1].first);
    }
    CHECK(series.back().first == 137);
    CHECK(series.back().second ==
          doctest::Approx(hypervolume_2d(pareto_front(recs))).epsilon(1e-12));
    CHECK_THROWS_AS(hypervolume_convergence(recs, 0), std::invalid_argument);
}

TEST_CASE("identical groups yield no significant parameters") {
    std::mt19937_64 rng(85);
    std::vector<Genome> group;
    for (int i = 0; i < 20; ++i) group.push_back(oracle::random_genome(rng));
    const auto results = parameter_significance(group, group, 0.01);
    REQUIRE(results.size() == kGenomeSize);
    for (const auto& r : results) {
        CHECK(!r.significant);
        CHECK(r.p_raw == 1.0);
        CHECK(r.parameter.size() > 0);
    }
    CHECK(results[0].parameter == "ground_front_cranial");
    CHECK(results[17].parameter == "tibia_extension");
}

TEST_CASE("a disjoint tibia split is flagged as exactly one significant parameter") {
    std::mt19937_64 rng(86);
    std::uniform_real_distribution<double> lo(0.0, 0.3), hi(0.7, 1.0);
    std::vector<Genome> a, b;
    for (int i = 0; i < 30; ++i) {
        Genome base;  // identical in every other coordinate
        for (auto& v : base.values) v = 0.5;
        Genome ga = base, gb = base;
        ga.values[17] = lo(rng);
        gb.values[17] = hi(rng);
        a.push_back(ga);
        b.push_back(gb);
    }
    const auto results = parameter_significance(a, b, 0.01);
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        CHECK(results[i].significant == (i == 17));
    }

    // two-sided: verdicts are symmetric in group order
    const auto mirrored = parameter_significance(b, a, 0.01);
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        CHECK(mirrored[i].significant == results[i].significant);
        CHECK(mirrored[i].p_raw == doctest::Approx(results[i].p_raw).epsilon(1e-12));
    }
}

TEST_CASE("distance matrix: identical performance collapses to zero") {
    std::vector<ReevalRecord> rows;
    for (const char* id : {"i1", "i2"}) {
        for (const char* s : {"A", "B"}) {
            rows.push_back(rrow(id, s, 5.0, -0.5));
            rows.push_back(rrow(id, s, 7.0, -0.1));  // same mean everywhere
        }
    }
    const DistanceMatrix dm = distance_matrix(rows);
    CHECK(dm.at("A", "B") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dm.at("A", "A") == 0.0);
}

TEST_CASE("distance matrix: hand-built 3-4-5 construction gives 0.75") {
    // pooled speed and stability both span [0,1], so normalization is identity
    std::vector<ReevalRecord> rows;
    rows.push_back(rrow("i1", "s1", 0.0, 0.0));
    rows.push_back(rrow("i1", "s2", 0.3, 0.4));
    rows.push_back(rrow("i2", "s1", 1.0, 1.0));
    rows.push_back(rrow("i2", "s2", 0.4, 0.2));
    const DistanceMatrix dm = distance_matrix(rows);
    CHECK(dm.at("s1", "s2") == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(dm.at("s2", "s1") == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("distance matrix is symmetric, non-negative, zero-diagonal and label-invariant") {
    std::mt19937_64 rng(87);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ReevalRecord> rows, relabeled;
    for (int ind = 0; ind < 6; ++ind) {
        for (const char* s : {"A", "B", "C", "D"}) {
            for (int rep = 0; rep < 5; ++rep) {
                auto row = rrow("i" + std::to_string(ind), s, 12.0 * u(rng), -u(rng));
                rows.push_back(row);
                row.individual_id = "renamed-" + row.individual_id;
                relabeled.push_back(row);
            }
        }
    }
    const DistanceMatrix dm = distance_matrix(rows);
    const DistanceMatrix dm2 = distance_matrix(relabeled);
    for (std::size_t i = 0; i < dm.surfaces.size(); ++i) {
        CHECK(dm.distances[i][i] == 0.0);
        for (std::size_t j = 0; j < dm.surfaces.size(); ++j) {
            CHECK(dm.distances[i][j] == dm.distances[j][i]);
            CHECK(dm.distances[i][j] >= 0.0);
            CHECK(dm.distances[i][j] == doctest::Approx(dm2.distances[i][j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("distance matrix rejects missing surface coverage, naming the individual") {
    std::vector<ReevalRecord> rows;
    rows.push_back(rrow("complete", "A", 1.0, -0.5));
    rows.push_back(rrow("complete", "B", 2.0, -0.6));
    rows.push_back(rrow("partial", "A", 3.0, -0.7));
    try {
        distance_matrix(rows);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("partial") != std::string::npos);
    }
}

TEST_CASE("mean spline of one individual is its own trajectory") {
    Genome g;
    for (auto& v : g.values) v = 0.5;
    const GaitSpec spec = decode(g);
    const std::vector<GaitSpec> specs{spec};
    const auto curve = mean_spline(specs);
    REQUIRE(curve.size() == 1000);
    const TrajectorySpline spline = build_spline(spec);
    for (int i = 0; i < 1000; ++i) {
        CHECK(distance(curve[i], sample_foot(spline, i / 1000.0)) < 1e-12);
    }
}

TEST_CASE("mean of laterally mirrored trajectories lies in the mirror plane") {
    Genome g;
    for (auto& v : g.values) v = 0.5;
    GaitSpec a = decode(g);
    a.spline.air_front_lateral = 8.0;
    a.spline.air_top_lateral = -5.0;
    a.spline.air_back_lateral = 11.0;
    GaitSpec b = a;
    b.spline.air_front_lateral = -a.spline.air_front_lateral;
    b.spline.air_top_lateral = -a.spline.air_top_lateral;
    b.spline.air_back_lateral = -a.spline.air_back_lateral;

    const std::vector<GaitSpec> specs{a, b};
    const auto curve = mean_spline(specs);
    for (const auto& p : curve) CHECK(std::abs(p.x) < 1e-12);

    // accumulation order does not matter
    const std::vector<GaitSpec> swapped{b, a};
    const auto curve2 = mean_spline(swapped);
    for (int i = 0; i < 1000; ++i) CHECK(distance(curve[i], curve2[i]) < 1e-12);
}

TEST_CASE("kde: Scott bandwidth follows n^(-1/6) for d = 2") {
    std::mt19937_64 rng(88);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<std::array<double, 2>> samples(100);
    for (auto& s : samples) s = {n01(rng), n01(rng)};
    const Kde2D kde = kde_scott(samples);

    std::vector<double> xs, ys;
    for (const auto& s : samples) {
        xs.push_back(s[0]);
        ys.push_back(s[1]);
    }
    const double factor = std::pow(100.0, -1.0 / 6.0);
    CHECK(factor == doctest::Approx(0.4642).epsilon(5e-4));
    CHECK(kde.bandwidth_x == doctest::Approx(sample_std(xs) * factor).epsilon(1e-12));
    CHECK(kde.bandwidth_y == doctest::Approx(sample_std(ys) * factor).epsilon(1e-12));
}

TEST_CASE("kde density integrates to one over the padded grid") {
    std::mt19937_64 rng(89);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<std::array<double, 2>> samples(60);
        for (auto& s : samples) s = {3.0 * n01(rng), 25.0 + 0.5 * n01(rng)};
        const Kde2D kde = kde_scott(samples);
        const KdeGrid grid = kde_grid(kde, 120, 120, 4.0);
        CHECK(std::abs(grid.integral() - 1.0) < 0.01);
    }
}

TEST_CASE("kde: a tight cluster puts the mode at its mean") {
    std::mt19937_64 rng(90);
    std::normal_distribution<double> tiny(0.0, 0.01);
    std::vector<std::array<double, 2>> samples(80);
    double mx = 0.0, my = 0.0;
    for (auto& s : samples) {
        s = {4.0 + tiny(rng), -2.0 + tiny(rng)};
        mx += s[0];
        my += s[1];
    }
    mx /= samples.size();
    my /= samples.size();
    const Kde2D kde = kde_scott(samples);
    const KdeGrid grid = kde_grid(kde, 50, 50);
    double best = -1.0;
    int best_ix = 0, best_iy = 0;
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double v = grid.values[static_cast<std::size_t>(iy) * grid.nx + ix];
            if (v > best) {
                best = v;
                best_ix = ix;
                best_iy = iy;
            }
        }
    }
    const double x = grid.x_min + (best_ix + 0.5) * grid.cell_dx();
    const double y = grid.y_min + (best_iy + 0.5) * grid.cell_dy();
    CHECK(std::abs(x - mx) <= grid.cell_dx());
    CHECK(std::abs(y - my) <= grid.cell_dy());
}

TEST_CASE("kde rejects degenerate samples with a jitter hint") {
    std::vector<std::array<double, 2>> constant(10, {1.0, 2.0});
    try {
        kde_scott(constant);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("jitter") != std::string::npos);
    }
    CHECK_THROWS_AS(kde_scott(std::vector<std::array<double, 2>>(1, {0.0, 0.0})),
                    std::invalid_argument);
}
