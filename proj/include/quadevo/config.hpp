#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quadevo/nsga2.hpp"
#include "quadevo/surface.hpp"

namespace quadevo {

// Line-oriented key-value configuration with [section] headers, '#' comments
// and 'key = value' entries.
struct IniFile {
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };
    std::vector<std::pair<std::string, std::vector<Entry>>> sections;

    static IniFile parse_file(const std::string& path);
    static IniFile parse_string(const std::string& text, const std::string& path = "<string>");

    const std::vector<Entry>* find(const std::string& section) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::string output_dir = "out";
    std::vector<std::string> run_surfaces = {"A", "B"};
    int runs_per_surface = 5;
    std::uint64_t base_seed = 1000;
    int jobs = 1;
    bool alternate_surfaces = true;  // interleave run order across surfaces
    int reeval_per_surface = 6;
    int reeval_repeats = 20;
    EvolutionConfig evolution;
    std::map<std::string, SurfaceModel> surfaces;  // library defaults plus overrides
};

// Strict loader: unknown keys, malformed values, or references to undefined
// surfaces produce a diagnostic naming the offending field.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& path);

// Resolved round-trippable form; used for the run-directory manifest.
std::string serialize_experiment_config(const ExperimentConfig& cfg);

}  // namespace quadevo
