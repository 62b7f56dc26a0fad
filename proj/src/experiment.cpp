#include "quadevo/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "quadevo/rng.hpp"
#include "quadevo/spline.hpp"

namespace fs = std::filesystem;

namespace quadevo {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::string genome_header() {
    std::string h;
    for (int i = 0; i < static_cast<int>(kGenomeSize); ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), ",g%02d", i);
        h += buf;
    }
    return h;
}

void execute_run(const ExperimentConfig& cfg, const RunPlanEntry& run, std::ostream& status) {
    const fs::path dir(cfg.output_dir);
    const fs::path log_path = dir / (run.run_id + ".runlog.csv");
    const fs::path cfg_path = dir / (run.run_id + ".config");
    const fs::path ckpt_path = dir / (run.run_id + ".ckpt");

    EvolutionConfig ecfg = cfg.evolution;
    ecfg.surface = run.surface;
    ecfg.rng_seed = run.seed;

    if (fs::exists(log_path)) {
        status << "run " << run.run_id << ": already complete\n";
        return;
    }

    EvolutionState state;
    if (fs::exists(ckpt_path)) {
        state = load_checkpoint(ckpt_path.string(), ecfg);
        status << "run " << run.run_id << ": resuming after generation "
               << state.completed_generations << "\n";
    } else {
        state = init_evolution(ecfg, run.run_id);
    }

    const SurfaceModel& surface = cfg.surfaces.at(run.surface);
    const Evaluator evaluator = make_surrogate_evaluator(surface, ecfg.fitness);
    const GenerationHook hook = [&](const EvolutionState& s) {
        const fs::path tmp = ckpt_path.string() + ".tmp";
        save_checkpoint(s, tmp.string());
        fs::rename(tmp, ckpt_path);
    };

    const RunLog log = run_evolution_from(std::move(state), evaluator, hook);
    write_runlog_csv(log, log_path.string());
    write_config_snapshot(ecfg, run.run_id, cfg_path.string());
    fs::remove(ckpt_path);
    status << "run " << run.run_id << ": " << log.records.size() << " evaluations, surface "
           << run.surface << ", seed " << run.seed << "\n";
}

// Merged record set for one training surface with globally unique eval indices;
// ids keeps a stable label per merged index.
struct MergedRecords {
    std::vector<RunRecord> records;
    std::vector<std::string> ids;
};

MergedRecords merge_surface_records(const std::vector<LoadedRun>& runs, const std::string& surface) {
    MergedRecords merged;
    for (const auto& run : runs) {
        if (run.surface != surface) continue;
        for (const auto& rec : run.records) {
            RunRecord copy = rec;
            merged.ids.push_back(run.run_id + ":e" + std::to_string(rec.eval_index));
            copy.eval_index = static_cast<int>(merged.records.size());
            merged.records.push_back(std::move(copy));
        }
    }
    return merged;
}

std::vector<std::string> sorted_surface_names(const ExperimentConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& [name, s] : cfg.surfaces) names.push_back(name);
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace

std::vector<RunPlanEntry> plan_runs(const ExperimentConfig& cfg) {
    std::vector<RunPlanEntry> plan;
    auto entry = [&](std::size_t surface_idx, int run_idx) {
        RunPlanEntry e;
        e.surface = cfg.run_surfaces[surface_idx];
        e.run_id = e.surface + "-r" + std::to_string(run_idx);
        e.seed = cfg.base_seed + surface_idx * static_cast<std::uint64_t>(cfg.runs_per_surface) +
                 static_cast<std::uint64_t>(run_idx);
        return e;
    };
    if (cfg.alternate_surfaces) {
        for (int j = 0; j < cfg.runs_per_surface; ++j) {
            for (std::size_t s = 0; s < cfg.run_surfaces.size(); ++s) plan.push_back(entry(s, j));
        }
    } else {
        for (std::size_t s = 0; s < cfg.run_surfaces.size(); ++s) {
            for (int j = 0; j < cfg.runs_per_surface; ++j) plan.push_back(entry(s, j));
        }
    }
    return plan;
}

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, std::ostream& status) {
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    const std::vector<RunPlanEntry> plan = plan_runs(cfg);
    {
        auto os = open_out(dir / "manifest.ini");
        os << serialize_experiment_config(cfg);
        os << "\n[runs]\n";
        for (std::size_t i = 0; i < plan.size(); ++i) {
            os << "order" << i << " = " << plan[i].run_id << "\n";
        }
    }

    if (cfg.jobs <= 1) {
        for (const auto& run : plan) execute_run(cfg, run, status);
    } else {
        std::size_t next = 0;
        while (next < plan.size()) {
            const std::size_t batch = std::min<std::size_t>(cfg.jobs, plan.size() - next);
            std::vector<std::future<std::string>> futures;
            for (std::size_t k = 0; k < batch; ++k) {
                const RunPlanEntry& run = plan[next + k];
                futures.push_back(std::async(std::launch::async, [&cfg, run] {
                    std::ostringstream local;
                    execute_run(cfg, run, local);
                    return local.str();
                }));
            }
            for (auto& f : futures) status << f.get();
            next += batch;
        }
    }

    std::vector<std::string> paths;
    for (const auto& run : plan) paths.push_back((dir / (run.run_id + ".runlog.csv")).string());
    return paths;
}

ExperimentConfig load_manifest(const std::string& runs_dir) {
    const fs::path path = fs::path(runs_dir) / "manifest.ini";
    if (!fs::exists(path)) throw std::runtime_error("no manifest.ini in " + runs_dir);
    return load_experiment_config(path.string());
}

std::vector<LoadedRun> load_runs(const std::string& runs_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(runs_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 11 && name.substr(name.size() - 11) == ".runlog.csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no run logs found in " + runs_dir);

    std::vector<LoadedRun> runs;
    for (const auto& file : files) {
        LoadedRun run;
        const std::string name = file.filename().string();
        run.run_id = name.substr(0, name.size() - 11);
        run.records = read_runlog_csv(file.string());
        if (run.records.empty()) throw std::runtime_error(file.string() + ": empty run log");
        run.surface = run.records.front().surface;
        runs.push_back(std::move(run));
    }
    return runs;
}

std::vector<ReevalRecord> reevaluate_fronts(const ExperimentConfig& cfg,
                                            const std::vector<LoadedRun>& runs,
                                            std::uint64_t selection_seed, int per_surface,
                                            int repeats) {
    if (per_surface < 1 || repeats < 1) throw std::invalid_argument("re-evaluation counts must be >= 1");

    struct Selected {
        std::string id;
        std::string training_surface;
        Genome genome;
    };
    std::vector<Selected> selected;

    Rng rng(selection_seed);
    for (const auto& surface : cfg.run_surfaces) {
        MergedRecords merged = merge_surface_records(runs, surface);
        if (merged.records.empty()) {
            throw std::runtime_error("no runs found for training surface " + surface);
        }
        const FrontSnapshot front = pareto_front(merged.records);
        if (static_cast<int>(front.points.size()) < per_surface) {
            throw std::runtime_error("front for surface " + surface + " has only " +
                                     std::to_string(front.points.size()) +
                                     " individuals; re-run with --per-surface " +
                                     std::to_string(front.points.size()) + " or fewer");
        }
        // partial Fisher-Yates for a uniform draw without replacement
        std::vector<int> idx(front.points.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        for (int k = 0; k < per_surface; ++k) {
            const int j = k + static_cast<int>(rng.below(idx.size() - k));
            std::swap(idx[k], idx[j]);
            const FrontPoint& p = front.points[idx[k]];
            selected.push_back({merged.ids[p.eval_index], surface, p.genome});
        }
    }

    const std::vector<std::string> eval_surfaces = sorted_surface_names(cfg);
    std::vector<ReevalRecord> rows;
    rows.reserve(selected.size() * eval_surfaces.size() * repeats);
    for (std::size_t ind = 0; ind < selected.size(); ++ind) {
        const GaitSpec spec = decode(selected[ind].genome);
        for (std::size_t s = 0; s < eval_surfaces.size(); ++s) {
            const SurfaceModel& surface = cfg.surfaces.at(eval_surfaces[s]);
            for (int rep = 0; rep < repeats; ++rep) {
                ReevalRecord row;
                row.individual_id = selected[ind].training_surface + ":" + selected[ind].id;
                row.training_surface = selected[ind].training_surface;
                row.eval_surface = eval_surfaces[s];
                row.repeat = rep;
                row.seed = hash_combine(hash_combine(hash_combine(mix64(selection_seed), ind), s),
                                        static_cast<std::uint64_t>(rep));
                row.fitness = evaluate(spec, surface, row.seed, cfg.evolution.fitness);
                row.genome = selected[ind].genome;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

namespace {

struct SurfaceAnalysis {
    std::string surface;
    std::vector<const LoadedRun*> runs;
    std::vector<FrontSnapshot> run_fronts;          // aligned with runs
    std::vector<Genome> front_genomes;              // union over runs
    std::vector<std::string> front_run_ids;         // aligned with front_genomes
};

SurfaceAnalysis analyze_surface(const std::vector<LoadedRun>& runs, const std::string& surface) {
    SurfaceAnalysis out;
    out.surface = surface;
    for (const auto& run : runs) {
        if (run.surface != surface) continue;
        out.runs.push_back(&run);
        out.run_fronts.push_back(pareto_front(run.records));
        for (const auto& p : out.run_fronts.back().points) {
            out.front_genomes.push_back(p.genome);
            out.front_run_ids.push_back(run.run_id);
        }
    }
    return out;
}

}  // namespace

void analyze_experiment(const ExperimentConfig& cfg, const std::vector<LoadedRun>& runs,
                        const std::vector<ReevalRecord>& reevals, const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::ostringstream report;
    report << "# quadevo-report v1\n";

    std::vector<SurfaceAnalysis> analyses;
    for (const auto& surface : cfg.run_surfaces) {
        analyses.push_back(analyze_surface(runs, surface));
        if (analyses.back().runs.empty()) {
            throw std::runtime_error("no runs for configured surface " + surface);
        }
    }

    const int stride = cfg.evolution.population_size;

    for (auto& sa : analyses) {
        // per-run front points
        {
            auto os = open_out(dir / ("fronts_" + sa.surface + ".csv"));
            os << "# quadevo-fronts v1\n";
            os << "run_id,eval_index,speed_m_per_min,stability" << genome_header() << "\n";
            for (std::size_t r = 0; r < sa.runs.size(); ++r) {
                for (const auto& p : sa.run_fronts[r].points) {
                    os << sa.runs[r]->run_id << "," << p.eval_index << "," << fmt(p.speed) << ","
                       << fmt(p.stability);
                    for (double g : p.genome.values) os << "," << fmt(g);
                    os << "\n";
                }
            }
        }

        // hypervolume series per run plus the cross-run mean with 95% CI
        std::map<int, std::vector<double>> by_count;
        {
            auto os = open_out(dir / ("hypervolume_" + sa.surface + ".csv"));
            os << "# quadevo-hypervolume v1\n";
            os << "run_id,eval_count,hypervolume\n";
            for (const auto* run : sa.runs) {
                const auto series = hypervolume_convergence(run->records, stride);
                for (const auto& [count, hv] : series) {
                    os << run->run_id << "," << count << "," << fmt(hv) << "\n";
                    by_count[count].push_back(hv);
                }
            }
        }
        {
            auto os = open_out(dir / ("hypervolume_mean_" + sa.surface + ".csv"));
            os << "# quadevo-hypervolume-mean v1\n";
            os << "eval_count,mean,ci_lo,ci_hi,n_runs\n";
            for (const auto& [count, values] : by_count) {
                if (values.size() != sa.runs.size()) continue;  // partial logs
                const double m = mean(values);
                const double hw = values.size() >= 2 ? t_interval_halfwidth_95(values) : 0.0;
                os << count << "," << fmt(m) << "," << fmt(m - hw) << "," << fmt(m + hw) << ","
                   << values.size() << "\n";
            }
        }

        // phenotype values of every front member (distribution plots)
        {
            auto os = open_out(dir / ("parameters_" + sa.surface + ".csv"));
            os << "# quadevo-parameters v1\n";
            os << "run_id,parameter,value\n";
            for (std::size_t i = 0; i < sa.front_genomes.size(); ++i) {
                const auto phen = to_phenotype_array(decode(sa.front_genomes[i]));
                for (std::size_t k = 0; k < kGenomeSize; ++k) {
                    os << sa.front_run_ids[i] << "," << parameter_names()[k] << "," << fmt(phen[k])
                       << "\n";
                }
            }
        }

        // mean trajectory over the union of front members
        {
            std::vector<GaitSpec> specs;
            specs.reserve(sa.front_genomes.size());
            for (const auto& g : sa.front_genomes) specs.push_back(decode(g));
            const auto curve = mean_spline(specs);
            auto os = open_out(dir / ("mean_spline_" + sa.surface + ".csv"));
            os << "# quadevo-mean-spline v1\n";
            os << "phase,lateral,cranial,dorsal\n";
            for (std::size_t i = 0; i < curve.size(); ++i) {
                os << fmt(static_cast<double>(i) / curve.size()) << "," << fmt(curve[i].x) << ","
                   << fmt(curve[i].y) << "," << fmt(curve[i].z) << "\n";
            }
        }

        // control-point KDEs in the (cranial, dorsal) plane; ground points have a
        // fixed dorsal coordinate, so only the air points have full-rank samples
        struct PointField {
            const char* label;
            std::size_t cranial_idx;
            std::size_t dorsal_idx;
        };
        const PointField fields[] = {{"air_front", 3, 4}, {"air_top", 6, 7}, {"air_back", 9, 10}};
        for (const auto& f : fields) {
            std::vector<std::array<double, 2>> samples;
            for (const auto& g : sa.front_genomes) {
                const auto phen = to_phenotype_array(decode(g));
                samples.push_back({phen[f.cranial_idx], phen[f.dorsal_idx]});
            }
            try {
                const Kde2D kde = kde_scott(samples);
                const KdeGrid grid = kde_grid(kde, 80, 80);
                auto os = open_out(dir / ("kde_" + sa.surface + "_" + f.label + ".csv"));
                os << "# quadevo-kde v1\n";
                os << "cranial,dorsal,density\n";
                for (int iy = 0; iy < grid.ny; ++iy) {
                    for (int ix = 0; ix < grid.nx; ++ix) {
                        const double x = grid.x_min + (ix + 0.5) * grid.cell_dx();
                        const double y = grid.y_min + (iy + 0.5) * grid.cell_dy();
                        os << fmt(x) << "," << fmt(y) << ","
                           << fmt(grid.values[static_cast<std::size_t>(iy) * grid.nx + ix]) << "\n";
                    }
                }
            } catch (const std::invalid_argument& err) {
                report << "kde skipped for " << sa.surface << "/" << f.label << ": " << err.what()
                       << "\n";
            }
        }

        report << "surface " << sa.surface << ": " << sa.runs.size() << " runs, "
               << sa.front_genomes.size() << " front members\n";
        for (std::size_t r = 0; r < sa.runs.size(); ++r) {
            const auto series = hypervolume_convergence(sa.runs[r]->records, stride);
            report << "  " << sa.runs[r]->run_id << ": final hypervolume "
                   << fmt(series.back().second) << " (" << sa.run_fronts[r].points.size()
                   << " front points)\n";
        }
    }

    // parameter significance between the first two training surfaces
    if (analyses.size() >= 2) {
        const auto results = parameter_significance(analyses[0].front_genomes,
                                                    analyses[1].front_genomes, 0.01);
        auto os = open_out(dir / "significance.csv");
        os << "# quadevo-significance v1\n";
        os << "parameter,u,p_raw,p_adjusted,significant\n";
        report << "significance (" << analyses[0].surface << " vs " << analyses[1].surface
               << ", n1=" << analyses[0].front_genomes.size()
               << ", n2=" << analyses[1].front_genomes.size() << ", alpha=0.01):\n";
        for (const auto& r : results) {
            os << r.parameter << "," << fmt(r.u) << "," << fmt(r.p_raw) << "," << fmt(r.p_adjusted)
               << "," << (r.significant ? "true" : "false") << "\n";
            if (r.significant) {
                report << "  *** " << r.parameter << " (U=" << fmt(r.u)
                       << ", p_adj=" << fmt(r.p_adjusted) << ")\n";
            }
        }
    }

    if (!reevals.empty()) {
        const DistanceMatrix dm = distance_matrix(reevals);
        auto os = open_out(dir / "distance_matrix.csv");
        os << "# quadevo-distance-matrix v1\n";
        os << "surface";
        for (const auto& s : dm.surfaces) os << "," << s;
        os << "\n";
        report << "distance matrix:\n";
        for (std::size_t i = 0; i < dm.surfaces.size(); ++i) {
            os << dm.surfaces[i];
            report << "  " << dm.surfaces[i] << ":";
            for (std::size_t j = 0; j < dm.surfaces.size(); ++j) {
                os << "," << fmt(dm.distances[i][j]);
                char buf[16];
                std::snprintf(buf, sizeof(buf), " %.3f", dm.distances[i][j]);
                report << buf;
            }
            os << "\n";
            report << "\n";
        }
    }

    {
        auto os = open_out(dir / "report.txt");
        os << report.str();
    }
}

namespace {

// generic pass-through of our own CSVs: skip the schema line, return header+rows
std::pair<std::string, std::vector<std::string>> read_csv_body(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::string schema, header, row;
    std::getline(is, schema);
    std::getline(is, header);
    std::vector<std::string> rows;
    while (std::getline(is, row)) {
        if (!row.empty()) rows.push_back(row);
    }
    return {header, rows};
}

}  // namespace

void export_plots(const std::string& analysis_dir, const std::string& out_dir) {
    const fs::path in(analysis_dir);
    const fs::path out(out_dir);
    fs::create_directories(out);

    auto merge_by_prefix = [&](const std::string& prefix, const std::string& out_name,
                               const std::string& label_col, const std::string& exclude = "") {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(in)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 4 &&
                name.substr(name.size() - 4) == ".csv" &&
                (exclude.empty() || name.rfind(exclude, 0) != 0)) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) return;
        auto os = open_out(out / out_name);
        os << "# quadevo-plot v1\n";
        bool wrote_header = false;
        for (const auto& file : files) {
            const std::string stem = file.stem().string();  // e.g. fronts_A
            const std::string label = stem.substr(prefix.size());
            const auto [header, rows] = read_csv_body(file);
            if (!wrote_header) {
                os << label_col << "," << header << "\n";
                wrote_header = true;
            }
            for (const auto& row : rows) os << label << "," << row << "\n";
        }
    };

    merge_by_prefix("fronts_", "fig_fronts.csv", "surface");
    merge_by_prefix("hypervolume_mean_", "fig_hypervolume.csv", "surface");
    merge_by_prefix("hypervolume_", "fig_hypervolume_runs.csv", "surface", "hypervolume_mean_");
    merge_by_prefix("parameters_", "fig_parameters.csv", "surface");
    merge_by_prefix("mean_spline_", "fig_mean_splines.csv", "surface");
    merge_by_prefix("kde_", "fig_kde.csv", "surface_point");

    for (const char* name : {"significance.csv", "distance_matrix.csv"}) {
        if (fs::exists(in / name)) {
            fs::copy_file(in / name, out / (std::string("fig_") + name),
                          fs::copy_options::overwrite_existing);
        }
    }
}

}  // namespace quadevo
