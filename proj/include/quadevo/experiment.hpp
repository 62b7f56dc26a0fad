#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "quadevo/analysis.hpp"
#include "quadevo/config.hpp"
#include "quadevo/runlog.hpp"

namespace quadevo {

struct RunPlanEntry {
    std::string run_id;
    std::string surface;
    std::uint64_t seed = 0;
};

// Execution order of the run matrix; runs on different surfaces are interleaved
// when alternate_surfaces is set. Seeds are base_seed + a per-(surface, index)
// offset, unique across the matrix.
std::vector<RunPlanEntry> plan_runs(const ExperimentConfig& cfg);

// Executes every planned run into cfg.output_dir: one runlog CSV and one config
// snapshot per run, a manifest for the whole experiment, and a per-generation
// checkpoint while a run is in flight. Completed runs are skipped; interrupted
// ones resume from their checkpoint. Returns the runlog paths in plan order.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, std::ostream& status);

struct LoadedRun {
    std::string run_id;
    std::string surface;
    std::vector<RunRecord> records;
};

ExperimentConfig load_manifest(const std::string& runs_dir);
std::vector<LoadedRun> load_runs(const std::string& runs_dir);

// Experiment-2 style verification: per training surface, draw `per_surface`
// individuals uniformly (seeded) from the merged global front, then evaluate
// each `repeats` times on every configured surface with derived seeds.
std::vector<ReevalRecord> reevaluate_fronts(const ExperimentConfig& cfg,
                                            const std::vector<LoadedRun>& runs,
                                            std::uint64_t selection_seed, int per_surface,
                                            int repeats);

// Writes the full analysis bundle (fronts, hypervolume series and means,
// parameter distributions and significance, mean splines, KDE grids, distance
// matrix, plain-text report) into out_dir. reevals may be empty.
void analyze_experiment(const ExperimentConfig& cfg, const std::vector<LoadedRun>& runs,
                        const std::vector<ReevalRecord>& reevals, const std::string& out_dir);

// Reshapes an analysis directory into per-figure CSVs.
void export_plots(const std::string& analysis_dir, const std::string& out_dir);

}  // namespace quadevo
