#include "quadevo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace quadevo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_evaluated(const std::vector<Individual>& pop) {
    for (const auto& ind : pop) {
        if (!ind.fitness.has_value()) {
            throw std::invalid_argument("non-dominated sort requires evaluated individuals");
        }
    }
}

// (rank asc, crowding desc); true when a is strictly preferred
int compare_selection(const Individual& a, const Individual& b) {
    if (a.rank != b.rank) return a.rank < b.rank ? 1 : -1;
    if (a.crowding != b.crowding) return a.crowding > b.crowding ? 1 : -1;
    return 0;
}

std::string serialize_engine(const std::mt19937_64& engine) {
    std::ostringstream os;
    os << engine;
    return os.str();
}

void restore_engine(std::mt19937_64& engine, const std::string& state) {
    std::istringstream is(state);
    is >> engine;
    if (is.fail()) throw std::runtime_error("bad rng state in checkpoint");
}

}  // namespace

bool dominates(const Fitness& a, const Fitness& b) {
    const bool ge = a.speed >= b.speed && a.stability >= b.stability;
    const bool gt = a.speed > b.speed || a.stability > b.stability;
    return ge && gt;
}

std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop) {
    require_evaluated(pop);
    const int n = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated_by(n);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<int>> fronts;

    std::vector<int> current;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(*pop[i].fitness, *pop[j].fitness)) {
                dominated_by[i].push_back(j);
            } else if (dominates(*pop[j].fitness, *pop[i].fitness)) {
                ++domination_count[i];
            }
        }
        if (domination_count[i] == 0) {
            pop[i].rank = 0;
            current.push_back(i);
        }
    }

    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated_by[i]) {
                if (--domination_count[j] == 0) {
                    pop[j].rank = static_cast<int>(fronts.size());
                    next.push_back(j);
                }
            }
        }
        current = std::move(next);
    }
    return fronts;
}

void crowding_distance(std::vector<Individual>& pop, const std::vector<int>& front) {
    if (front.empty()) return;
    for (int i : front) pop[i].crowding = 0.0;
    if (front.size() <= 2) {
        for (int i : front) pop[i].crowding = kInf;
        return;
    }

    auto assign_for = [&](auto key) {
        std::vector<int> order = front;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return key(pop[a]) < key(pop[b]); });
        const double lo = key(pop[order.front()]);
        const double hi = key(pop[order.back()]);
        pop[order.front()].crowding = kInf;
        pop[order.back()].crowding = kInf;
        if (hi <= lo) return;  // degenerate objective: no interior contribution
        for (std::size_t k = 1; k + 1 < order.size(); ++k) {
            if (pop[order[k]].crowding == kInf) continue;
            pop[order[k]].crowding += (key(pop[order[k + 1]]) - key(pop[order[k - 1]])) / (hi - lo);
        }
    };
    assign_for([](const Individual& ind) { return ind.fitness->speed; });
    assign_for([](const Individual& ind) { return ind.fitness->stability; });
}

Genome mutate(const Genome& genome, Rng& rng, double sigma, double probability) {
    Genome out = genome;
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        if (probability < 1.0 && rng.uniform() >= probability) continue;
        double v = out.values[i] + sigma * rng.gaussian();
        // reflect overshoot back toward the middle of the range
        while (v < 0.0 || v > 1.0) {
            if (v > 1.0) v = 2.0 - v;
            if (v < 0.0) v = -v;
        }
        out.values[i] = v;
    }
    return out;
}

std::vector<int> select_parents(const std::vector<Individual>& pop, Rng& rng) {
    const int n = static_cast<int>(pop.size());
    std::vector<int> parents;
    parents.reserve(n);
    for (int k = 0; k < n; ++k) {
        const int a = static_cast<int>(rng.below(n));
        const int b = static_cast<int>(rng.below(n));
        const int cmp = compare_selection(pop[a], pop[b]);
        if (cmp > 0) {
            parents.push_back(a);
        } else if (cmp < 0) {
            parents.push_back(b);
        } else {
            parents.push_back(rng.coin() ? a : b);
        }
    }
    return parents;
}

Evaluator make_surrogate_evaluator(const SurfaceModel& surface, const FitnessConfig& cfg) {
    return [surface, cfg](const Genome& genome, const EvalMeta& meta) -> EvalOutcome {
        const GaitSpec spec = decode(genome);
        const EvaluationTrace trace = rollout(spec, surface, meta.seed, cfg.rollout);
        EvalOutcome out;
        out.duration_s = trace.t_end - trace.t_start;
        if (trace.failed) {
            out.fitness = kFailedFitness;
            out.terminated_by = "failed";
        } else {
            out.fitness = {speed_fitness(trace), stability_fitness(trace, cfg)};
            out.terminated_by =
                trace.terminated_by == EvaluationTrace::Termination::distance ? "distance" : "timeout";
        }
        return out;
    };
}

EvolutionState init_evolution(const EvolutionConfig& cfg, std::string run_id) {
    if (cfg.population_size < 2 || cfg.generations < 1 || cfg.mutation_sigma <= 0.0) {
        throw std::invalid_argument("invalid evolution config");
    }
    EvolutionState state;
    state.config = cfg;
    state.run_id = std::move(run_id);
    Rng rng(cfg.rng_seed);
    state.rng_state = serialize_engine(rng.engine());
    return state;
}

namespace {

void evaluate_into(EvolutionState& state, std::vector<Individual>& batch, int generation,
                   const Evaluator& evaluate) {
    for (auto& ind : batch) {
        ind.meta.generation = generation;
        ind.meta.eval_index = state.next_eval_index++;
        ind.meta.seed = hash_combine(mix64(state.config.rng_seed), static_cast<std::uint64_t>(ind.meta.eval_index));
        ind.meta.surface = state.config.surface;
        const EvalOutcome outcome = evaluate(ind.genome, ind.meta);
        ind.fitness = outcome.fitness;
        state.sim_time_s += outcome.duration_s;

        RunRecord rec;
        rec.generation = generation;
        rec.eval_index = ind.meta.eval_index;
        rec.genome = ind.genome;
        rec.fitness = outcome.fitness;
        rec.surface = ind.meta.surface;
        rec.seed = ind.meta.seed;
        rec.terminated_by = outcome.terminated_by;
        rec.sim_time_s = state.sim_time_s;
        state.records.push_back(std::move(rec));
    }
}

}  // namespace

std::vector<Individual> environmental_selection(std::vector<Individual> combined, int target) {
    auto fronts = fast_nondominated_sort(combined);
    std::vector<Individual> survivors;
    survivors.reserve(target);
    for (const auto& front : fronts) {
        crowding_distance(combined, front);
        if (static_cast<int>(survivors.size() + front.size()) <= target) {
            for (int i : front) survivors.push_back(combined[i]);
        } else {
            std::vector<int> order = front;
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return combined[a].crowding > combined[b].crowding;
            });
            for (int i : order) {
                if (static_cast<int>(survivors.size()) >= target) break;
                survivors.push_back(combined[i]);
            }
        }
        if (static_cast<int>(survivors.size()) >= target) break;
    }
    return survivors;
}

RunLog run_evolution_from(EvolutionState state, const Evaluator& evaluate,
                          const GenerationHook& hook) {
    const EvolutionConfig& cfg = state.config;
    Rng rng(cfg.rng_seed);
    restore_engine(rng.engine(), state.rng_state);

    if (state.completed_generations < 0) {
        std::vector<Individual> initial(cfg.population_size);
        for (auto& ind : initial) {
            for (auto& v : ind.genome.values) v = rng.uniform();
        }
        evaluate_into(state, initial, 0, evaluate);
        state.population = std::move(initial);
        state.completed_generations = 0;
        state.rng_state = serialize_engine(rng.engine());
        if (hook) hook(state);
    }

    while (!state.finished()) {
        const int generation = state.completed_generations + 1;

        const auto fronts = fast_nondominated_sort(state.population);
        for (const auto& front : fronts) crowding_distance(state.population, front);
        const std::vector<int> parents = select_parents(state.population, rng);

        std::vector<Individual> offspring;
        offspring.reserve(parents.size());
        for (int p : parents) {
            Individual child;
            child.genome = mutate(state.population[p].genome, rng, cfg.mutation_sigma,
                                  cfg.mutation_probability);
            offspring.push_back(std::move(child));
        }
        evaluate_into(state, offspring, generation, evaluate);

        std::vector<Individual> combined = state.population;
        combined.insert(combined.end(), offspring.begin(), offspring.end());
        state.population = environmental_selection(std::move(combined), cfg.population_size);

        state.completed_generations = generation;
        state.rng_state = serialize_engine(rng.engine());
        if (hook) hook(state);
    }

    RunLog log;
    log.run_id = state.run_id;
    log.config = state.config;
    log.records = std::move(state.records);
    log.final_population = std::move(state.population);
    return log;
}

RunLog run_evolution(const EvolutionConfig& cfg, std::string run_id, const Evaluator& evaluate,
                     const GenerationHook& hook) {
    return run_evolution_from(init_evolution(cfg, std::move(run_id)), evaluate, hook);
}

}  // namespace quadevo
