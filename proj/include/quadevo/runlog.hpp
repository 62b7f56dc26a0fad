#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "quadevo/nsga2.hpp"

namespace quadevo {

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& path, int line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

// One evaluation record per row:
// generation,eval_index,g00..g17,speed_m_per_min,stability,surface,seed,terminated_by,sim_time_s
// Every file starts with a schema-version line; writers emit full-precision
// decimals so reruns with equal seeds are byte-identical.
void write_runlog_csv(const RunLog& log, const std::string& path);
std::vector<RunRecord> read_runlog_csv(const std::string& path);

std::string describe_config(const EvolutionConfig& cfg);
void write_config_snapshot(const EvolutionConfig& cfg, const std::string& run_id,
                           const std::string& path);

// Per-generation checkpoint; resuming replays into a log identical to an
// uninterrupted run. Loading verifies the config fingerprint.
void save_checkpoint(const EvolutionState& state, const std::string& path);
EvolutionState load_checkpoint(const std::string& path, const EvolutionConfig& expected);

struct ReevalRecord {
    std::string individual_id;
    std::string training_surface;
    std::string eval_surface;
    int repeat = 0;
    std::uint64_t seed = 0;
    Fitness fitness;
    Genome genome;
};

void write_reeval_csv(const std::vector<ReevalRecord>& rows, const std::string& path);
std::vector<ReevalRecord> read_reeval_csv(const std::string& path);

}  // namespace quadevo
