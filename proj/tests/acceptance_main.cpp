// Acceptance suite: one pass/fail line per criterion, each pinned to its
// tolerance and runtime budget. Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "quadevo/experiment.hpp"
#include "quadevo/kinematics.hpp"
#include "quadevo/spline.hpp"

namespace fs = std::filesystem;
using namespace quadevo;

namespace {

struct Check {
    bool ok = true;
    std::string why;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            why = msg;
        }
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

Check criterion_sorting() {
    Check c;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 32);
    for (int rep = 0; rep < 200 && c.ok; ++rep) {
        std::vector<std::pair<double, double>> fits(size(rng));
        for (auto& f : fits) f = {15.0 * u(rng), -u(rng)};
        if (fits.size() > 4 && rep % 4 == 0) fits[2] = fits[0];  // exact duplicates

        std::vector<Individual> pop(fits.size());
        for (std::size_t i = 0; i < fits.size(); ++i) {
            pop[i].fitness = Fitness{fits[i].first, fits[i].second};
            pop[i].meta.eval_index = static_cast<int>(i);
        }
        const auto fronts = fast_nondominated_sort(pop);
        const auto expected = oracle::brute_force_fronts(fits);
        c.require(fronts.size() == expected.size(), "front count mismatch");
        for (std::size_t k = 0; c.ok && k < fronts.size(); ++k) {
            c.require(std::set<int>(fronts[k].begin(), fronts[k].end()) ==
                          std::set<int>(expected[k].begin(), expected[k].end()),
                      "front membership mismatch at layer " + std::to_string(k));
        }
    }

    // crowding fixtures
    std::vector<Individual> three(3);
    three[0].fitness = Fitness{0.0, 0.0};
    three[1].fitness = Fitness{1.0, -0.5};
    three[2].fitness = Fitness{2.0, -1.0};
    crowding_distance(three, {0, 1, 2});
    c.require(std::isinf(three[0].crowding) && std::isinf(three[2].crowding),
              "boundary crowding must be infinite");
    c.require(std::abs(three[1].crowding - 2.0) < 1e-12, "equally spaced middle crowding != 2.0");

    std::vector<Individual> two(2);
    two[0].fitness = Fitness{1.0, -0.1};
    two[1].fitness = Fitness{2.0, -0.2};
    crowding_distance(two, {0, 1});
    c.require(std::isinf(two[0].crowding) && std::isinf(two[1].crowding),
              "fronts of two must be all-infinite");
    return c;
}

Check criterion_hypervolume() {
    Check c;
    c.require(hypervolume_2d({{10.0, -0.5}}) == 5.0, "single point (10,-0.5) must give exactly 5.0");
    c.require(hypervolume_2d(std::vector<std::pair<double, double>>{}) == 0.0,
              "empty front must give exactly 0");

    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50 && c.ok; ++rep) {
        std::vector<std::pair<double, double>> pts(15);
        double max_speed = 0.0;
        for (auto& p : pts) {
            p = {0.5 + 12.0 * u(rng), -0.96 * u(rng) - 0.02};
            max_speed = std::max(max_speed, p.first);
        }
        const double fast = hypervolume_2d(pts);
        const double grid = oracle::grid_hypervolume(pts, 0.0, -1.0, max_speed, 0.0, 2000);
        c.require(std::abs(fast - grid) <= 0.005 * fast,
                  "grid oracle deviation " + std::to_string(std::abs(fast - grid) / fast) +
                      " at rep " + std::to_string(rep));
    }
    return c;
}

Check criterion_spline() {
    Check c;
    std::mt19937_64 rng(103);
    for (int rep = 0; rep < 1000 && c.ok; ++rep) {
        const GaitSpec spec = decode(oracle::random_genome(rng));
        const TrajectorySpline spline = build_spline(spec);
        for (int k = 0; k < 5; ++k) {
            c.require(distance(sample_foot(spline, spline.knot_phases[k]), spline.knots[k]) < 1e-9,
                      "knot interpolation miss at rep " + std::to_string(rep));
        }
        c.require(distance(sample_foot(spline, 1.0 - 1e-12), sample_foot(spline, 0.0)) < 1e-6,
                  "loop seam gap at rep " + std::to_string(rep));
        const double stance_end = spline.stance_end_phase();
        for (int k = 0; k < 25; ++k) {
            const Vec3 p = sample_foot(spline, stance_end * (k / 25.0));
            c.require(p.z == 0.0, "stance dorsal must be exactly zero");
        }
    }

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int rep = 0; rep < 100000 && c.ok; ++rep) {
        MorphologyParams m{50.0 * u01(rng), 100.0 * u01(rng)};
        const LegGeometry geom = make_leg_geometry(m);
        const double inner = std::abs(geom.femur_length - geom.tibia_length);
        const double outer = geom.femur_length + geom.tibia_length;
        const double dist = inner + (outer - inner) * (0.02 + 0.96 * u01(rng));
        const double alpha = -1.2 + 2.4 * u01(rng);
        const double coxa = -0.9 + 1.8 * u01(rng);
        const double r = dist * std::cos(alpha) + geom.coxa_length;
        const Vec3 target{r * std::sin(coxa), dist * std::sin(alpha), -r * std::cos(coxa)};
        const IkResult ik = inverse_kinematics(target, geom);
        c.require(ik.ok(), "reachable target rejected");
        if (c.ok) {
            c.require(distance(forward_kinematics(*ik.angles, geom), target) < 1e-6,
                      "FK(IK(p)) roundtrip error > 1e-6 mm");
        }
    }
    return c;
}

Check criterion_mutation() {
    Check c;
    Rng rng(104);
    Genome mid;
    for (auto& v : mid.values) v = 0.5;

    const int n = 100000;
    double sum = 0.0, ss = 0.0;
    for (int rep = 0; rep < n; ++rep) {
        const Genome out = mutate(mid, rng);
        for (double g : out.values) {
            c.require(g >= 0.0 && g <= 1.0, "mutated element escaped [0,1]");
        }
        const double v = out.values[4];
        sum += v;
        ss += (v - 0.5) * (v - 0.5);
    }
    const double mean_v = sum / n;
    const double sd = std::sqrt(ss / n - (mean_v - 0.5) * (mean_v - 0.5));
    c.require(std::abs(mean_v - 0.5) < 0.005,
              "mutation mean drifted to " + std::to_string(mean_v));
    c.require(std::abs(sd - 1.0 / 6.0) < 0.02 / 6.0,
              "mutation sigma " + std::to_string(sd) + " not within 2% of 1/6");

    Genome ones, zeros;
    for (auto& v : ones.values) v = 1.0;
    for (int rep = 0; rep < 3000 && c.ok; ++rep) {
        const Genome a = mutate(ones, rng);
        const Genome b = mutate(zeros, rng);
        for (std::size_t i = 0; i < kGenomeSize; ++i) {
            c.require(a.values[i] < 1.0 && a.values[i] >= 0.0, "boundary start not interior (hi)");
            c.require(b.values[i] > 0.0 && b.values[i] <= 1.0, "boundary start not interior (lo)");
        }
    }
    return c;
}

Check criterion_statistics() {
    Check c;
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> cont(0.0, 1.0);
    std::uniform_int_distribution<int> tied(0, 3);

    // exact branch against full enumeration for every n1, n2 <= 8
    for (int n1 = 1; n1 <= 8 && c.ok; ++n1) {
        for (int n2 = 1; n2 <= 8 && c.ok; ++n2) {
            for (int variant = 0; variant < 2; ++variant) {
                std::vector<double> x(n1), y(n2);
                for (auto& v : x) v = variant ? tied(rng) : cont(rng);
                for (auto& v : y) v = variant ? tied(rng) : cont(rng);
                const MannWhitneyResult r = mann_whitney_u(x, y);
                c.require(r.exact, "exact branch not taken at pooled n <= 16");
                double r1 = 0.0;
                {  // U recomputed from first principles: pair counting
                    for (double xv : x) {
                        for (double yv : y) {
                            if (xv > yv) r1 += 1.0;
                            else if (xv == yv) r1 += 0.5;
                        }
                    }
                }
                c.require(r.u == r1, "U statistic differs from pair counting");
                c.require(std::abs(r.p - oracle::exact_mw_p(x, y)) < 1e-9,
                          "exact p differs from enumeration at n1=" + std::to_string(n1) +
                              " n2=" + std::to_string(n2));
            }
        }
    }

    // normal branch against a 1e6-resample permutation oracle, 10 random cases
    for (int case_id = 0; case_id < 10 && c.ok; ++case_id) {
        std::mt19937_64 gen(1000 + case_id);
        std::normal_distribution<double> na(0.0, 1.0), nb(1.0, 1.0);
        std::vector<double> x(30), y(30);
        for (auto& v : x) v = na(gen);
        for (auto& v : y) v = nb(gen);
        const MannWhitneyResult r = mann_whitney_u(x, y);
        c.require(!r.exact, "normal branch not taken at n = 60");
        const double p_perm = oracle::permutation_mw_p(x, y, 1000000, 40 + case_id);
        c.require(std::abs(r.p - p_perm) < 1e-3,
                  "normal-approximation p off by " + std::to_string(std::abs(r.p - p_perm)) +
                      " at case " + std::to_string(case_id));
    }

    // Holm-Bonferroni worked fixture
    const HolmResult h = holm_bonferroni({0.001, 0.02, 0.04}, 0.05);
    c.require(std::abs(h.adjusted[0] - 0.003) < 1e-15 && std::abs(h.adjusted[1] - 0.04) < 1e-15 &&
                  std::abs(h.adjusted[2] - 0.04) < 1e-15,
              "Holm adjusted values differ from the worked fixture");
    c.require(h.rejected[0] && h.rejected[1] && h.rejected[2],
              "Holm step-down rejections differ from the worked fixture");
    return c;
}

Check criterion_fitness() {
    Check c;
    EvaluationTrace tr;
    tr.positions.assign(601, Vec3{});
    tr.orientations.assign(601, Vec3{});
    tr.accelerations.assign(601, Vec3{});
    tr.t_end = 6.0;
    tr.positions.back() = {0.0, 1.0, 0.0};
    c.require(speed_fitness(tr) == 10.0, "1 m / 6 s must be exactly 10 m/min");

    FitnessConfig cfg;
    c.require(cfg.alpha == 0.02, "default alpha must be exactly 1/50");

    EvaluationTrace flat;
    flat.positions.assign(500, Vec3{});
    flat.orientations.assign(500, Vec3{0.25, -0.5, 1.5});
    flat.accelerations.assign(500, Vec3{2.0, 0.125, -0.75});
    flat.t_end = 4.99;
    c.require(stability_fitness_raw(flat, cfg) == 0.0, "constant series must give exactly 0");

    std::mt19937_64 rng(106);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    EvaluationTrace noisy = flat;
    for (auto& v : noisy.accelerations) v = {u(rng), u(rng), u(rng)};
    for (auto& v : noisy.orientations) v = Vec3{};
    const double raw1 = stability_fitness_raw(noisy, cfg);
    FitnessConfig doubled = cfg;
    doubled.alpha = 2.0 * cfg.alpha;
    const double raw2 = stability_fitness_raw(noisy, doubled);
    c.require(std::abs(raw2 - 2.0 * raw1) <= 1e-12, "alpha linearity violated beyond 1e-12");
    return c;
}

struct ExperimentArtifacts {
    fs::path dir;
    ExperimentConfig manifest;
    std::vector<LoadedRun> runs;
    std::vector<ReevalRecord> reevals;
    fs::path reeval_path;
    fs::path analysis_dir;
};

ExperimentConfig experiment_config(const std::string& out_dir) {
    ExperimentConfig cfg = parse_experiment_config(
        "[experiment]\n"
        "name = acceptance\n"
        "surfaces = A,B\n"
        "runs_per_surface = 5\n"
        "base_seed = 7000\n"
        "[evolution]\n"
        "population_size = 8\n"
        "generations = 32\n",
        "acceptance");
    cfg.output_dir = out_dir;
    return cfg;
}

void build_artifacts(ExperimentArtifacts& art, const fs::path& base) {
    art.dir = base;
    fs::remove_all(base);
    const ExperimentConfig cfg = experiment_config((base / "runs").string());
    std::ostringstream status;
    run_experiment(cfg, status);
    art.manifest = load_manifest((base / "runs").string());
    art.runs = load_runs((base / "runs").string());
    art.reevals = reevaluate_fronts(art.manifest, art.runs, 9090, 6, 20);
    art.reeval_path = base / "reeval.csv";
    write_reeval_csv(art.reevals, art.reeval_path.string());
    art.analysis_dir = base / "analysis";
    analyze_experiment(art.manifest, art.runs, art.reevals, art.analysis_dir.string());
}

Check criterion_experiment1(ExperimentArtifacts& art, double& runtime_s) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    build_artifacts(art, fs::temp_directory_path() / "quadevo-acceptance-1");
    runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    c.require(art.runs.size() == 10, "expected 10 runs");
    std::vector<Genome> group_a, group_b;
    for (const auto& run : art.runs) {
        c.require(run.records.size() == 264, "run must book 8 + 32*8 evaluations");
        const auto series = hypervolume_convergence(run.records, 8);
        for (std::size_t i = 1; i < series.size(); ++i) {
            c.require(series[i].second >= series[i - 1].second - 1e-12,
                      "hypervolume series not monotone in run " + run.run_id);
        }
        const FrontSnapshot front = pareto_front(run.records);
        for (const auto& p : front.points) {
            (run.surface == "A" ? group_a : group_b).push_back(p.genome);
        }
    }
    c.require(!group_a.empty() && !group_b.empty(), "empty merged fronts");

    const auto results = parameter_significance(group_a, group_b, 0.01);
    const bool morphology_significant = results[16].significant || results[17].significant;
    c.require(morphology_significant,
              "no morphology parameter significant at alpha = 0.01 (femur p_adj=" +
                  std::to_string(results[16].p_adjusted) +
                  ", tibia p_adj=" + std::to_string(results[17].p_adjusted) + ")");
    return c;
}

Check criterion_experiment2(const ExperimentArtifacts& art, double& runtime_s) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    c.require(art.reevals.size() == 960, "re-evaluation must produce 12 x 4 x 20 = 960 rows");

    const DistanceMatrix dm = distance_matrix(art.reevals);
    const double within = 0.5 * (dm.at("A", "C") + dm.at("B", "D"));
    const double cross =
        0.25 * (dm.at("A", "B") + dm.at("A", "D") + dm.at("C", "B") + dm.at("C", "D"));
    c.require(within < cross, "within-hardness distance " + std::to_string(within) +
                                  " not below cross-class " + std::to_string(cross));
    runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

Check criterion_determinism(const ExperimentArtifacts& art) {
    Check c;
    ExperimentArtifacts repeat;
    build_artifacts(repeat, fs::temp_directory_path() / "quadevo-acceptance-2");

    for (const auto& run : art.runs) {
        const fs::path a = art.dir / "runs" / (run.run_id + ".runlog.csv");
        const fs::path b = repeat.dir / "runs" / (run.run_id + ".runlog.csv");
        c.require(slurp(a) == slurp(b), "run log " + run.run_id + " differs between reruns");
    }
    c.require(slurp(art.reeval_path) == slurp(repeat.reeval_path),
              "re-evaluation CSV differs between reruns");
    for (const auto& entry : fs::directory_iterator(art.analysis_dir)) {
        const fs::path other = repeat.analysis_dir / entry.path().filename();
        c.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
                  "analysis output " + entry.path().filename().string() + " differs");
    }
    fs::remove_all(art.dir);
    fs::remove_all(repeat.dir);
    return c;
}

}  // namespace

int main() {
    int failures = 0;
    ExperimentArtifacts artifacts;

    struct Row {
        int id;
        const char* label;
        std::function<Check(double&)> run;
        double budget_s;
    };

    const std::vector<Row> rows = {
        {1, "non-dominated sorting and crowding vs brute-force oracle",
         [](double&) { return criterion_sorting(); }, 5.0},
        {2, "hypervolume staircase vs 2000x2000 grid indicator",
         [](double&) { return criterion_hypervolume(); }, 30.0},
        {3, "spline interpolation, seam, stance plane, FK/IK roundtrip",
         [](double&) { return criterion_spline(); }, 10.0},
        {4, "Gaussian mutation statistics and reflection bounds",
         [](double&) { return criterion_mutation(); }, 5.0},
        {5, "Mann-Whitney exact/normal branches and Holm fixture",
         [](double&) { return criterion_statistics(); }, 120.0},
        {6, "speed/stability formula fixtures and alpha default",
         [](double&) { return criterion_fitness(); }, 5.0},
        {7, "evolution runs on A and B with morphology significance",
         [&artifacts](double& t) { return criterion_experiment1(artifacts, t); }, 300.0},
        {8, "cross-surface re-evaluation distance structure",
         [&artifacts](double& t) { return criterion_experiment2(artifacts, t); }, 180.0},
        {9, "byte-identical reruns of the full pipeline",
         [&artifacts](double&) { return criterion_determinism(artifacts); }, 600.0},
    };

    for (const auto& row : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        double measured = -1.0;
        Check c;
        try {
            c = row.run(measured);
        } catch (const std::exception& e) {
            c.ok = false;
            c.why = std::string("exception: ") + e.what();
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (measured >= 0.0) elapsed = measured;
        if (elapsed > row.budget_s) {
            c.ok = false;
            c.why = "runtime budget exceeded";
        }
        std::printf("[%s] criterion %d: %s (%.2fs of %.0fs)%s%s\n", c.ok ? "PASS" : "FAIL", row.id,
                    row.label, elapsed, row.budget_s, c.ok ? "" : " -- ", c.ok ? "" : c.why.c_str());
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }

    if (failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
