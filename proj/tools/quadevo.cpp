#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "quadevo/experiment.hpp"

namespace fs = std::filesystem;
using namespace quadevo;

namespace {

// QUADEVO_OUT overrides relative output locations
std::string resolve_out(const std::string& path) {
    const char* root = std::getenv("QUADEVO_OUT");
    if (!root || fs::path(path).is_absolute()) return path;
    return (fs::path(root) / path).string();
}

int cmd_evolve(const std::string& config_path, int jobs) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (jobs > 0) cfg.jobs = jobs;
    cfg.output_dir = resolve_out(cfg.output_dir);
    run_experiment(cfg, std::cout);
    std::cout << "runs written to " << cfg.output_dir << "\n";
    return 0;
}

int cmd_reevaluate(const std::string& runs_dir, const std::string& out_path, std::uint64_t seed,
                   int per_surface, int repeats) {
    const ExperimentConfig cfg = load_manifest(runs_dir);
    const auto runs = load_runs(runs_dir);
    const auto rows = reevaluate_fronts(cfg, runs, seed, per_surface, repeats);
    write_reeval_csv(rows, resolve_out(out_path));
    std::cout << rows.size() << " re-evaluations written to " << resolve_out(out_path) << "\n";
    return 0;
}

int cmd_analyze(const std::string& runs_dir, const std::string& reeval_path,
                const std::string& out_dir) {
    const ExperimentConfig cfg = load_manifest(runs_dir);
    const auto runs = load_runs(runs_dir);
    std::vector<ReevalRecord> reevals;
    if (!reeval_path.empty()) reevals = read_reeval_csv(reeval_path);
    analyze_experiment(cfg, runs, reevals, resolve_out(out_dir));
    std::cout << "analysis written to " << resolve_out(out_dir) << "\n";
    return 0;
}

int cmd_export_plots(const std::string& analysis_dir, const std::string& out_dir) {
    export_plots(analysis_dir, resolve_out(out_dir));
    std::cout << "plot data written to " << resolve_out(out_dir) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadruped morphology/gait co-optimization experiments"};
    app.require_subcommand(1);

    std::string config_path, runs_dir, out_path, reeval_path, analysis_dir;
    int jobs = 0;
    std::uint64_t seed = 1;
    int per_surface = 6;
    int repeats = 20;

    auto* evolve = app.add_subcommand("evolve", "run the configured evolution matrix");
    evolve->add_option("--config", config_path, "experiment config file")->required();
    evolve->add_option("--jobs", jobs, "parallel runs (overrides config)");

    auto* reeval = app.add_subcommand("reevaluate", "re-evaluate front individuals on all surfaces");
    reeval->add_option("--runs", runs_dir, "directory of run logs")->required();
    reeval->add_option("--out", out_path, "output CSV path")->required();
    reeval->add_option("--seed", seed, "selection seed")->required();
    reeval->add_option("--per-surface", per_surface, "individuals per training surface");
    reeval->add_option("--repeats", repeats, "evaluations per individual per surface");

    auto* analyze = app.add_subcommand("analyze", "produce the analysis bundle");
    analyze->add_option("--runs", runs_dir, "directory of run logs")->required();
    analyze->add_option("--reeval", reeval_path, "re-evaluation CSV (optional)");
    analyze->add_option("--out", out_path, "output directory")->required();

    auto* plots = app.add_subcommand("export-plots", "reshape analysis output into per-figure CSVs");
    plots->add_option("--analysis", analysis_dir, "analysis directory")->required();
    plots->add_option("--out", out_path, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (evolve->parsed()) return cmd_evolve(config_path, jobs);
        if (reeval->parsed()) return cmd_reevaluate(runs_dir, out_path, seed, per_surface, repeats);
        if (analyze->parsed()) return cmd_analyze(runs_dir, reeval_path, out_path);
        if (plots->parsed()) return cmd_export_plots(analysis_dir, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
