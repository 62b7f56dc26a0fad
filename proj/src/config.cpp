#include "quadevo/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "quadevo/runlog.hpp"

namespace quadevo {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw parse_error(path, line, msg);
}

double parse_double(const IniFile::Entry& e, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        fail(path, e.line, "key '" + e.key + "' expects a number, got '" + e.value + "'");
    }
}

long long parse_int(const IniFile::Entry& e, const std::string& path) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        fail(path, e.line, "key '" + e.key + "' expects an integer, got '" + e.value + "'");
    }
}

bool parse_bool(const IniFile::Entry& e, const std::string& path) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(path, e.line, "key '" + e.key + "' expects true/false, got '" + e.value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text, const std::string& path) {
    IniFile ini;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    std::string section;
    while (std::getline(is, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(path, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) fail(path, line, "empty section name");
            if (!ini.find(section)) ini.sections.emplace_back(section, std::vector<Entry>{});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(path, line, "expected 'key = value'");
        if (section.empty()) fail(path, line, "entry before any [section]");
        Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
        if (e.key.empty()) fail(path, line, "empty key");
        for (auto& [name, entries] : ini.sections) {
            if (name == section) {
                entries.push_back(std::move(e));
                break;
            }
        }
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_string(buf.str(), path);
}

const std::vector<IniFile::Entry>* IniFile::find(const std::string& section) const {
    for (const auto& [name, entries] : sections) {
        if (name == section) return &entries;
    }
    return nullptr;
}

std::optional<std::string> IniFile::get(const std::string& section, const std::string& key) const {
    const auto* entries = find(section);
    if (!entries) return std::nullopt;
    for (const auto& e : *entries) {
        if (e.key == key) return e.value;
    }
    return std::nullopt;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& path) {
    const IniFile ini = IniFile::parse_string(text, path);
    ExperimentConfig cfg;
    for (const auto& s : surface_library()) cfg.surfaces[s.name] = s;

    for (const auto& [section, entries] : ini.sections) {
        if (section == "experiment") {
            for (const auto& e : entries) {
                if (e.key == "name") cfg.name = e.value;
                else if (e.key == "output_dir") cfg.output_dir = e.value;
                else if (e.key == "surfaces") cfg.run_surfaces = parse_list(e.value);
                else if (e.key == "runs_per_surface") cfg.runs_per_surface = static_cast<int>(parse_int(e, path));
                else if (e.key == "base_seed") cfg.base_seed = static_cast<std::uint64_t>(parse_int(e, path));
                else if (e.key == "jobs") cfg.jobs = static_cast<int>(parse_int(e, path));
                else if (e.key == "alternate_surfaces") cfg.alternate_surfaces = parse_bool(e, path);
                else if (e.key == "reeval_per_surface") cfg.reeval_per_surface = static_cast<int>(parse_int(e, path));
                else if (e.key == "reeval_repeats") cfg.reeval_repeats = static_cast<int>(parse_int(e, path));
                else fail(path, e.line, "unknown key '" + e.key + "' in [experiment]");
            }
        } else if (section == "evolution") {
            for (const auto& e : entries) {
                if (e.key == "population_size") cfg.evolution.population_size = static_cast<int>(parse_int(e, path));
                else if (e.key == "generations") cfg.evolution.generations = static_cast<int>(parse_int(e, path));
                else if (e.key == "mutation_sigma") cfg.evolution.mutation_sigma = parse_double(e, path);
                else if (e.key == "mutation_probability") cfg.evolution.mutation_probability = parse_double(e, path);
                else if (e.key == "count_initial_in_budget") cfg.evolution.count_initial_in_budget = parse_bool(e, path);
                else fail(path, e.line, "unknown key '" + e.key + "' in [evolution]");
            }
        } else if (section == "fitness") {
            for (const auto& e : entries) {
                if (e.key == "alpha") cfg.evolution.fitness.alpha = parse_double(e, path);
                else if (e.key == "stability_scale") cfg.evolution.fitness.stability_scale = parse_double(e, path);
                else fail(path, e.line, "unknown key '" + e.key + "' in [fitness]");
            }
        } else if (section == "rollout") {
            RolloutParams& r = cfg.evolution.fitness.rollout;
            for (const auto& e : entries) {
                if (e.key == "control_rate_hz") r.control_rate_hz = parse_double(e, path);
                else if (e.key == "sample_rate_hz") r.sample_rate_hz = parse_double(e, path);
                else if (e.key == "max_duration_s") r.max_duration_s = parse_double(e, path);
                else if (e.key == "target_distance_m") r.target_distance_m = parse_double(e, path);
                else if (e.key == "ref_speed_mm_s") r.ref_speed_mm_s = parse_double(e, path);
                else if (e.key == "max_joint_speed_rad_s") r.max_joint_speed_rad_s = parse_double(e, path);
                else if (e.key == "drag_gain") r.drag_gain = parse_double(e, path);
                else if (e.key == "drag_floor") r.drag_floor = parse_double(e, path);
                else if (e.key == "orient_omega_rad_s") r.orient_omega_rad_s = parse_double(e, path);
                else if (e.key == "tilt_gain_rad") r.tilt_gain_rad = parse_double(e, path);
                else if (e.key == "wag_gain_rad") r.wag_gain_rad = parse_double(e, path);
                else if (e.key == "wag_response_lead") r.wag_response_lead = parse_double(e, path);
                else if (e.key == "sink_pulse_rad_per_mm") r.sink_pulse_rad_per_mm = parse_double(e, path);
                else if (e.key == "rough_pulse_rad_per_mm") r.rough_pulse_rad_per_mm = parse_double(e, path);
                else if (e.key == "yaw_pulse_rad_per_mm") r.yaw_pulse_rad_per_mm = parse_double(e, path);
                else if (e.key == "pulse_decay_s") r.pulse_decay_s = parse_double(e, path);
                else if (e.key == "height_amp_exponent") r.height_amp_exponent = parse_double(e, path);
                else if (e.key == "acc_jitter_per_mm") r.acc_jitter_per_mm = parse_double(e, path);
                else fail(path, e.line, "unknown key '" + e.key + "' in [rollout]");
            }
        } else if (section.rfind("surface.", 0) == 0) {
            const std::string name = section.substr(8);
            if (name.empty()) fail(path, 0, "surface section with empty name");
            SurfaceModel& s = cfg.surfaces[name];
            s.name = name;
            for (const auto& e : entries) {
                if (e.key == "hardness") s.hardness = parse_double(e, path);
                else if (e.key == "roughness") s.roughness = parse_double(e, path);
                else if (e.key == "friction") s.friction = parse_double(e, path);
                else if (e.key == "sinkage_gain") s.sinkage_gain = parse_double(e, path);
                else if (e.key == "noise_gain") s.noise_gain = parse_double(e, path);
                else fail(path, e.line, "unknown key '" + e.key + "' in [" + section + "]");
            }
            if (!s.valid()) fail(path, 0, "surface '" + name + "' has out-of-range parameters");
        } else if (section == "runs") {
            // informational run-order echo in manifests; ignored on load
        } else {
            fail(path, 0, "unknown section [" + section + "]");
        }
    }

    if (cfg.run_surfaces.empty()) throw std::runtime_error(path + ": no surfaces configured");
    for (const auto& name : cfg.run_surfaces) {
        if (!cfg.surfaces.count(name)) {
            throw std::runtime_error(path + ": unknown surface " + name);
        }
    }
    if (cfg.runs_per_surface < 1) throw std::runtime_error(path + ": runs_per_surface must be >= 1");
    if (cfg.jobs < 1) throw std::runtime_error(path + ": jobs must be >= 1");
    std::set<std::string> unique(cfg.run_surfaces.begin(), cfg.run_surfaces.end());
    if (unique.size() != cfg.run_surfaces.size()) {
        throw std::runtime_error(path + ": duplicate surface in run matrix");
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_experiment_config(buf.str(), path);
}

std::string serialize_experiment_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "# quadevo-config v1\n";
    os << "[experiment]\n";
    os << "name = " << cfg.name << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "surfaces = ";
    for (std::size_t i = 0; i < cfg.run_surfaces.size(); ++i) {
        if (i) os << ",";
        os << cfg.run_surfaces[i];
    }
    os << "\n";
    os << "runs_per_surface = " << cfg.runs_per_surface << "\n";
    os << "base_seed = " << cfg.base_seed << "\n";
    os << "jobs = " << cfg.jobs << "\n";
    os << "alternate_surfaces = " << (cfg.alternate_surfaces ? "true" : "false") << "\n";
    os << "reeval_per_surface = " << cfg.reeval_per_surface << "\n";
    os << "reeval_repeats = " << cfg.reeval_repeats << "\n";
    os << "\n[evolution]\n";
    os << "population_size = " << cfg.evolution.population_size << "\n";
    os << "generations = " << cfg.evolution.generations << "\n";
    os << "mutation_sigma = " << fmt(cfg.evolution.mutation_sigma) << "\n";
    os << "mutation_probability = " << fmt(cfg.evolution.mutation_probability) << "\n";
    os << "count_initial_in_budget = " << (cfg.evolution.count_initial_in_budget ? "true" : "false") << "\n";
    os << "\n[fitness]\n";
    os << "alpha = " << fmt(cfg.evolution.fitness.alpha) << "\n";
    os << "stability_scale = " << fmt(cfg.evolution.fitness.stability_scale) << "\n";
    const RolloutParams& r = cfg.evolution.fitness.rollout;
    os << "\n[rollout]\n";
    os << "control_rate_hz = " << fmt(r.control_rate_hz) << "\n";
    os << "sample_rate_hz = " << fmt(r.sample_rate_hz) << "\n";
    os << "max_duration_s = " << fmt(r.max_duration_s) << "\n";
    os << "target_distance_m = " << fmt(r.target_distance_m) << "\n";
    os << "ref_speed_mm_s = " << fmt(r.ref_speed_mm_s) << "\n";
    os << "max_joint_speed_rad_s = " << fmt(r.max_joint_speed_rad_s) << "\n";
    os << "drag_gain = " << fmt(r.drag_gain) << "\n";
    os << "drag_floor = " << fmt(r.drag_floor) << "\n";
    os << "orient_omega_rad_s = " << fmt(r.orient_omega_rad_s) << "\n";
    os << "tilt_gain_rad = " << fmt(r.tilt_gain_rad) << "\n";
    os << "wag_gain_rad = " << fmt(r.wag_gain_rad) << "\n";
    os << "wag_response_lead = " << fmt(r.wag_response_lead) << "\n";
    os << "sink_pulse_rad_per_mm = " << fmt(r.sink_pulse_rad_per_mm) << "\n";
    os << "rough_pulse_rad_per_mm = " << fmt(r.rough_pulse_rad_per_mm) << "\n";
    os << "yaw_pulse_rad_per_mm = " << fmt(r.yaw_pulse_rad_per_mm) << "\n";
    os << "pulse_decay_s = " << fmt(r.pulse_decay_s) << "\n";
    os << "height_amp_exponent = " << fmt(r.height_amp_exponent) << "\n";
    os << "acc_jitter_per_mm = " << fmt(r.acc_jitter_per_mm) << "\n";
    for (const auto& [name, s] : cfg.surfaces) {
        os << "\n[surface." << name << "]\n";
        os << "hardness = " << fmt(s.hardness) << "\n";
        os << "roughness = " << fmt(s.roughness) << "\n";
        os << "friction = " << fmt(s.friction) << "\n";
        os << "sinkage_gain = " << fmt(s.sinkage_gain) << "\n";
        os << "noise_gain = " << fmt(s.noise_gain) << "\n";
    }
    return os.str();
}

}  // namespace quadevo
