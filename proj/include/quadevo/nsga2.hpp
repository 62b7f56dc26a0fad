#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quadevo/fitness.hpp"
#include "quadevo/params.hpp"
#include "quadevo/rng.hpp"
#include "quadevo/surface.hpp"

namespace quadevo {

struct EvalMeta {
    int generation = 0;
    int eval_index = 0;
    std::uint64_t seed = 0;
    std::string surface;
};

struct Individual {
    Genome genome;
    std::optional<Fitness> fitness;
    int rank = -1;
    double crowding = 0.0;
    EvalMeta meta;
};

struct EvolutionConfig {
    int population_size = 8;
    int generations = 32;
    double mutation_sigma = 1.0 / 6.0;
    double mutation_probability = 1.0;
    // when true, the initial population counts against the evaluation budget
    // (generations - 1 offspring generations, e.g. exactly 256 for 8 x 32)
    bool count_initial_in_budget = false;
    std::uint64_t rng_seed = 1;
    std::string surface = "A";
    FitnessConfig fitness;

    int offspring_generations() const {
        return count_initial_in_budget ? generations - 1 : generations;
    }
    int total_evaluations() const {
        return population_size * (1 + offspring_generations());
    }
};

struct RunRecord {
    int generation = 0;   // 0 = initial population
    int eval_index = 0;   // global, append order
    Genome genome;
    Fitness fitness;
    std::string surface;
    std::uint64_t seed = 0;
    std::string terminated_by;  // distance | timeout | failed
    double sim_time_s = 0.0;    // cumulative simulated walking time (log clock)
};

struct RunLog {
    std::string run_id;
    EvolutionConfig config;
    std::vector<RunRecord> records;
    std::vector<Individual> final_population;
};

// a dominates b when a is >= in both objectives and > in at least one
bool dominates(const Fitness& a, const Fitness& b);

// Deb's fast non-dominated sort; assigns rank (front index) on each individual
// and returns the fronts as index lists. Throws if any individual is unevaluated.
std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop);

// Assigns crowding distance within one front: boundary individuals per objective
// get +inf, interior ones the sum of normalized neighbor gaps.
void crowding_distance(std::vector<Individual>& pop, const std::vector<int>& front);

// Gaussian perturbation of every element; overshoot past a bound reflects back
// toward the interior (repeatedly, for large steps).
Genome mutate(const Genome& genome, Rng& rng, double sigma = 1.0 / 6.0, double probability = 1.0);

// Binary tournament on (rank asc, crowding desc); exact ties fall to a coin flip.
// Requires ranks and crowding assigned; returns population_size parent indices.
std::vector<int> select_parents(const std::vector<Individual>& pop, Rng& rng);

// (mu+lambda) truncation: whole fronts by rank, the split front by crowding
// distance (descending, stable).
std::vector<Individual> environmental_selection(std::vector<Individual> combined, int target);

struct EvalOutcome {
    Fitness fitness;
    std::string terminated_by;  // distance | timeout | failed
    double duration_s = 0.0;
};

using Evaluator = std::function<EvalOutcome(const Genome&, const EvalMeta&)>;

// Checkpointable snapshot of a run between generations.
struct EvolutionState {
    EvolutionConfig config;
    std::string run_id;
    std::string rng_state;  // serialized mt19937_64 stream
    int completed_generations = -1;  // -1 = initial population not evaluated yet
    int next_eval_index = 0;
    double sim_time_s = 0.0;
    std::vector<Individual> population;
    std::vector<RunRecord> records;

    bool finished() const { return completed_generations >= config.offspring_generations(); }
};

using GenerationHook = std::function<void(const EvolutionState&)>;

// Rollout-backed evaluator. Rollout seeds arrive via EvalMeta::seed, which the
// loop derives from (rng_seed, eval_index), so evaluation order cannot change
// results.
Evaluator make_surrogate_evaluator(const SurfaceModel& surface, const FitnessConfig& cfg);

EvolutionState init_evolution(const EvolutionConfig& cfg, std::string run_id);

// Runs (or finishes) the generational loop: evaluate initial population, then
// select -> mutate -> evaluate -> (mu+lambda) truncation per generation. The hook
// fires after the initial evaluation and after every completed generation.
RunLog run_evolution_from(EvolutionState state, const Evaluator& evaluate,
                          const GenerationHook& hook = nullptr);

RunLog run_evolution(const EvolutionConfig& cfg, std::string run_id, const Evaluator& evaluate,
                     const GenerationHook& hook = nullptr);

}  // namespace quadevo
