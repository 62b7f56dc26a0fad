#include "quadevo/runlog.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quadevo/rng.hpp"

namespace quadevo {

namespace {

constexpr const char* kRunlogSchema = "# quadevo-runlog v1";
constexpr const char* kConfigSchema = "# quadevo-config-snapshot v1";
constexpr const char* kCheckpointSchema = "# quadevo-checkpoint v1";
constexpr const char* kReevalSchema = "# quadevo-reeval v1";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error(path, line, "expected a number, got '" + s + "'");
    }
}

long long to_ll(const std::string& s, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error(path, line, "expected an integer, got '" + s + "'");
    }
}

std::uint64_t to_u64(const std::string& s, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error(path, line, "expected an unsigned integer, got '" + s + "'");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // LF line endings everywhere
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return is;
}

void expect_schema(std::ifstream& is, const char* schema, const std::string& path, int& line) {
    std::string first;
    std::getline(is, first);
    ++line;
    if (first != schema) {
        throw parse_error(path, line, std::string("expected schema line '") + schema + "'");
    }
}

std::string record_header() {
    std::string h = "generation,eval_index";
    for (int i = 0; i < static_cast<int>(kGenomeSize); ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), ",g%02d", i);
        h += buf;
    }
    h += ",speed_m_per_min,stability,surface,seed,terminated_by,sim_time_s";
    return h;
}

std::string record_row(const RunRecord& r) {
    std::string row = std::to_string(r.generation) + "," + std::to_string(r.eval_index);
    for (double g : r.genome.values) row += "," + fmt(g);
    row += "," + fmt(r.fitness.speed) + "," + fmt(r.fitness.stability) + "," + r.surface + "," +
           std::to_string(r.seed) + "," + r.terminated_by + "," + fmt(r.sim_time_s);
    return row;
}

RunRecord parse_record_row(const std::string& row, const std::string& path, int line) {
    const auto f = split(row, ',');
    const std::size_t expected = 2 + kGenomeSize + 6;
    if (f.size() != expected) {
        throw parse_error(path, line,
                          "expected " + std::to_string(expected) + " columns, got " + std::to_string(f.size()));
    }
    RunRecord r;
    r.generation = static_cast<int>(to_ll(f[0], path, line));
    r.eval_index = static_cast<int>(to_ll(f[1], path, line));
    for (std::size_t i = 0; i < kGenomeSize; ++i) r.genome.values[i] = to_double(f[2 + i], path, line);
    r.fitness.speed = to_double(f[2 + kGenomeSize], path, line);
    r.fitness.stability = to_double(f[3 + kGenomeSize], path, line);
    r.surface = f[4 + kGenomeSize];
    r.seed = to_u64(f[5 + kGenomeSize], path, line);
    r.terminated_by = f[6 + kGenomeSize];
    r.sim_time_s = to_double(f[7 + kGenomeSize], path, line);
    return r;
}

}  // namespace

void write_runlog_csv(const RunLog& log, const std::string& path) {
    auto os = open_out(path);
    os << kRunlogSchema << "\n" << record_header() << "\n";
    for (const auto& r : log.records) os << record_row(r) << "\n";
}

std::vector<RunRecord> read_runlog_csv(const std::string& path) {
    auto is = open_in(path);
    int line = 0;
    expect_schema(is, kRunlogSchema, path, line);
    std::string header;
    std::getline(is, header);
    ++line;
    if (header != record_header()) throw parse_error(path, line, "unexpected run-log header row");
    std::vector<RunRecord> records;
    std::string row;
    while (std::getline(is, row)) {
        ++line;
        if (row.empty()) continue;
        records.push_back(parse_record_row(row, path, line));
    }
    return records;
}

std::string describe_config(const EvolutionConfig& cfg) {
    std::ostringstream os;
    os << "population_size = " << cfg.population_size << "\n"
       << "generations = " << cfg.generations << "\n"
       << "mutation_sigma = " << fmt(cfg.mutation_sigma) << "\n"
       << "mutation_probability = " << fmt(cfg.mutation_probability) << "\n"
       << "count_initial_in_budget = " << (cfg.count_initial_in_budget ? "true" : "false") << "\n"
       << "rng_seed = " << cfg.rng_seed << "\n"
       << "surface = " << cfg.surface << "\n"
       << "alpha = " << fmt(cfg.fitness.alpha) << "\n"
       << "stability_scale = " << fmt(cfg.fitness.stability_scale) << "\n";
    const RolloutParams& r = cfg.fitness.rollout;
    os << "control_rate_hz = " << fmt(r.control_rate_hz) << "\n"
       << "sample_rate_hz = " << fmt(r.sample_rate_hz) << "\n"
       << "max_duration_s = " << fmt(r.max_duration_s) << "\n"
       << "target_distance_m = " << fmt(r.target_distance_m) << "\n"
       << "ref_speed_mm_s = " << fmt(r.ref_speed_mm_s) << "\n"
       << "max_joint_speed_rad_s = " << fmt(r.max_joint_speed_rad_s) << "\n"
       << "drag_gain = " << fmt(r.drag_gain) << "\n"
       << "drag_floor = " << fmt(r.drag_floor) << "\n"
       << "orient_omega_rad_s = " << fmt(r.orient_omega_rad_s) << "\n"
       << "tilt_gain_rad = " << fmt(r.tilt_gain_rad) << "\n"
       << "wag_gain_rad = " << fmt(r.wag_gain_rad) << "\n"
       << "wag_response_lead = " << fmt(r.wag_response_lead) << "\n"
       << "sink_pulse_rad_per_mm = " << fmt(r.sink_pulse_rad_per_mm) << "\n"
       << "rough_pulse_rad_per_mm = " << fmt(r.rough_pulse_rad_per_mm) << "\n"
       << "yaw_pulse_rad_per_mm = " << fmt(r.yaw_pulse_rad_per_mm) << "\n"
       << "pulse_decay_s = " << fmt(r.pulse_decay_s) << "\n"
       << "height_amp_exponent = " << fmt(r.height_amp_exponent) << "\n"
       << "acc_jitter_per_mm = " << fmt(r.acc_jitter_per_mm) << "\n";
    return os.str();
}

void write_config_snapshot(const EvolutionConfig& cfg, const std::string& run_id,
                           const std::string& path) {
    auto os = open_out(path);
    os << kConfigSchema << "\n" << "run_id = " << run_id << "\n" << describe_config(cfg);
}

namespace {

std::uint64_t config_fingerprint(const EvolutionConfig& cfg) {
    const std::string desc = describe_config(cfg);
    std::uint64_t h = 0x9ae16a3b2f90404full;
    for (char c : desc) h = hash_combine(h, static_cast<unsigned char>(c));
    return h;
}

}  // namespace

void save_checkpoint(const EvolutionState& state, const std::string& path) {
    auto os = open_out(path);
    os << kCheckpointSchema << "\n";
    os << "run_id " << state.run_id << "\n";
    os << "config_hash " << config_fingerprint(state.config) << "\n";
    os << "completed_generations " << state.completed_generations << "\n";
    os << "next_eval_index " << state.next_eval_index << "\n";
    os << "sim_time_s " << fmt(state.sim_time_s) << "\n";
    os << "rng_state " << state.rng_state << "\n";
    os << "population " << state.population.size() << "\n";
    for (const auto& ind : state.population) {
        os << format_genome(ind.genome) << "," << fmt(ind.fitness->speed) << ","
           << fmt(ind.fitness->stability) << "," << ind.meta.generation << "," << ind.meta.eval_index
           << "," << ind.meta.seed << "," << ind.meta.surface << "\n";
    }
    os << "records " << state.records.size() << "\n";
    for (const auto& r : state.records) os << record_row(r) << "\n";
}

EvolutionState load_checkpoint(const std::string& path, const EvolutionConfig& expected) {
    auto is = open_in(path);
    int line = 0;
    expect_schema(is, kCheckpointSchema, path, line);

    EvolutionState state;
    state.config = expected;

    auto read_kv = [&](const char* key) {
        std::string row;
        std::getline(is, row);
        ++line;
        const std::string prefix = std::string(key) + " ";
        if (row.rfind(prefix, 0) != 0) throw parse_error(path, line, std::string("expected '") + key + "'");
        return row.substr(prefix.size());
    };

    state.run_id = read_kv("run_id");
    const std::uint64_t hash = to_u64(read_kv("config_hash"), path, line);
    if (hash != config_fingerprint(expected)) {
        throw parse_error(path, line, "checkpoint was produced by a different config");
    }
    state.completed_generations = static_cast<int>(to_ll(read_kv("completed_generations"), path, line));
    state.next_eval_index = static_cast<int>(to_ll(read_kv("next_eval_index"), path, line));
    state.sim_time_s = to_double(read_kv("sim_time_s"), path, line);
    state.rng_state = read_kv("rng_state");

    const long long pop_n = to_ll(read_kv("population"), path, line);
    for (long long i = 0; i < pop_n; ++i) {
        std::string row;
        std::getline(is, row);
        ++line;
        const auto f = split(row, ',');
        if (f.size() != kGenomeSize + 6) throw parse_error(path, line, "bad population row");
        Individual ind;
        for (std::size_t k = 0; k < kGenomeSize; ++k) ind.genome.values[k] = to_double(f[k], path, line);
        Fitness fit;
        fit.speed = to_double(f[kGenomeSize], path, line);
        fit.stability = to_double(f[kGenomeSize + 1], path, line);
        ind.fitness = fit;
        ind.meta.generation = static_cast<int>(to_ll(f[kGenomeSize + 2], path, line));
        ind.meta.eval_index = static_cast<int>(to_ll(f[kGenomeSize + 3], path, line));
        ind.meta.seed = to_u64(f[kGenomeSize + 4], path, line);
        ind.meta.surface = f[kGenomeSize + 5];
        state.population.push_back(std::move(ind));
    }

    const long long rec_n = to_ll(read_kv("records"), path, line);
    for (long long i = 0; i < rec_n; ++i) {
        std::string row;
        std::getline(is, row);
        ++line;
        state.records.push_back(parse_record_row(row, path, line));
    }
    return state;
}

void write_reeval_csv(const std::vector<ReevalRecord>& rows, const std::string& path) {
    auto os = open_out(path);
    os << kReevalSchema << "\n";
    os << "individual_id,training_surface,eval_surface,repeat,seed,speed_m_per_min,stability";
    for (int i = 0; i < static_cast<int>(kGenomeSize); ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), ",g%02d", i);
        os << buf;
    }
    os << "\n";
    for (const auto& r : rows) {
        os << r.individual_id << "," << r.training_surface << "," << r.eval_surface << ","
           << r.repeat << "," << r.seed << "," << fmt(r.fitness.speed) << ","
           << fmt(r.fitness.stability);
        for (double g : r.genome.values) os << "," << fmt(g);
        os << "\n";
    }
}

std::vector<ReevalRecord> read_reeval_csv(const std::string& path) {
    auto is = open_in(path);
    int line = 0;
    expect_schema(is, kReevalSchema, path, line);
    std::string header;
    std::getline(is, header);
    ++line;
    if (header.rfind("individual_id,", 0) != 0) throw parse_error(path, line, "unexpected re-eval header row");
    std::vector<ReevalRecord> rows;
    std::string row;
    while (std::getline(is, row)) {
        ++line;
        if (row.empty()) continue;
        const auto f = split(row, ',');
        if (f.size() != 7 + kGenomeSize) throw parse_error(path, line, "bad re-eval row");
        ReevalRecord r;
        r.individual_id = f[0];
        r.training_surface = f[1];
        r.eval_surface = f[2];
        r.repeat = static_cast<int>(to_ll(f[3], path, line));
        r.seed = to_u64(f[4], path, line);
        r.fitness.speed = to_double(f[5], path, line);
        r.fitness.stability = to_double(f[6], path, line);
        for (std::size_t k = 0; k < kGenomeSize; ++k) r.genome.values[k] = to_double(f[7 + k], path, line);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace quadevo
