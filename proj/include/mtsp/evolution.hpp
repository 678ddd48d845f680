#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtsp/metrics.hpp"
#include "mtsp/model.hpp"
#include "mtsp/rng.hpp"
#include "mtsp/simulator.hpp"

namespace mtsp {

// ---------------------------------------------------------------------------
// Fitness and dominance
// ---------------------------------------------------------------------------

struct Fitness {
    double g = 0.0;
    double h = 0.0;
    double f = 0.0;

    friend bool operator==(const Fitness&, const Fitness&) = default;
};

double fitness_f(int theta, int size);
double fitness_g(int kappa, int size, int target_size);
/// 0 when no type was used.
double fitness_h(int theta, long alpha, int size, int rho);

/// Strictly better on g and no worse on h, or the reverse, or tied on both and
/// strictly better on f.
bool dominates(const Fitness& x, const Fitness& y);

/// Best-so-far ordering: g, then h, then f.
bool better_lexicographic(const Fitness& x, const Fitness& y);

double fitness_distance(const Fitness& x, const Fitness& y);

/// Layers of mutual non-dominance, most dominant first. Indices within a
/// layer are increasing.
using Layering = std::vector<std::vector<std::size_t>>;
Layering build_layers(std::span<const Fitness> population);

// ---------------------------------------------------------------------------
// Schedules and layered selection
// ---------------------------------------------------------------------------

/// Linear interpolation from `first` at generation 1 to `last` at generation
/// `generations`.
double linear_schedule(double first, double last, int g, int generations);

/// Selection weight of each of `layers` layers under top weight `w`.
std::vector<double> layer_weights(std::size_t layers, double w);

/// Picks a layer with probability proportional to its weight, then an
/// individual uniformly within it.
class LayeredSelector {
public:
    LayeredSelector(const Layering& layers, double w);

    std::size_t draw(Rng& rng) const;  ///< with replacement
    std::size_t take(Rng& rng);        ///< without replacement; emptied layers drop out
    std::size_t remaining() const { return remaining_; }

private:
    Layering layers_;
    std::vector<double> weights_;
    std::size_t remaining_ = 0;
};

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

using Region = std::pair<std::size_t, std::size_t>;

struct CrossoverResult {
    Individual first;   ///< first parent with the exchanged segment
    Individual second;
    std::size_t cut1 = 0;  ///< cut drawn from the first parent's active region, longer-parent coordinates
    std::size_t cut2 = 0;
    std::size_t offset = 0;  ///< position of the shorter genome inside the longer
    bool fallback = false;   ///< no alignment met both active regions
};

/// Two-point crossover with the shorter genome aligned inside the longer.
/// Exchanges genes between the cuts, inclusive, so lengths are preserved.
CrossoverResult crossover(const Individual& a, Region active_a, const Individual& b, Region active_b, Rng& rng);

/// Replaces one label of one type with a different table entry.
Individual mutate(const Individual& ind, const LabelTable& table, ModelKind m, Rng& rng);

/// Genome of uniform length in [min_size, max_size]; each side draws eps with
/// weight `epsilon_weight` and every other table entry with weight 1.
Individual random_individual(std::size_t min_size, std::size_t max_size, const LabelTable& table, ModelKind m,
                             double epsilon_weight, Rng& rng);

// ---------------------------------------------------------------------------
// Generational loop
// ---------------------------------------------------------------------------

struct GAConfig {
    SimConfig sim;
    Shape target = square_shape(5);
    Seed seed = corner_seed(ModelKind::TwoD);
    int generations = 1000;
    int population = 1000;
    double elitist_fraction = 0.1;
    double diversity_fraction = 0.05;
    double crossover_p_initial = 0.3;
    double crossover_p_final = 0.7;
    double layer_weight_initial = 1.0;
    double layer_weight_final = 30.0;
    int max_crossover_attempts = 1000;
    double min_crossover_distance = 0.0;
    int genome_min = 25;
    int genome_max = 50;
    int labels = 10;  ///< non-eps labels in the table
    double epsilon_weight = 1.0;
    AlphaMode alpha_mode = AlphaMode::SamePosition;
    std::uint64_t rng_seed = 1;
    bool stop_on_success = false;
    int workers = 1;
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const GAConfig& cfg);

/// Type-count bound for squares in two dimensions; nullopt when none is known.
std::optional<int> type_bound(const Shape& target, int tau, ModelKind m);

struct Evaluated {
    Individual individual;
    SimOutcome outcome;
    MetricsReport metrics;
    Fitness fitness;
    bool success = false;
};

Evaluated evaluate(const Individual& ind, const GAConfig& cfg, std::uint64_t stream_seed);

/// Evaluates in parallel; result order and content do not depend on `workers`.
std::vector<Evaluated> evaluate_all(std::vector<Individual> individuals, const GAConfig& cfg,
                                    std::span<const std::uint64_t> stream_seeds, int workers);

struct GenerationStats {
    std::size_t elites = 0;
    std::size_t diversity = 0;
    std::size_t crossovers = 0;
    std::size_t mutations = 0;
    std::size_t crossover_fallbacks = 0;
    std::size_t distance_exhausted = 0;  ///< pair searches that ran out of attempts
};

struct PairChoice {
    std::size_t first = 0;
    std::size_t second = 0;
    int attempts = 0;
    bool accepted = false;
};

PairChoice select_crossover_pair(const LayeredSelector& selector, std::span<const Fitness> fitness, double min_dist,
                                 int max_attempts, Rng& rng);

/// Elites by layered selection without replacement, then uniform diversity
/// copies from the rest, then offspring. Returns the unevaluated offspring
/// separately so the caller controls evaluation.
struct Breeding {
    std::vector<std::size_t> elites;
    std::vector<std::size_t> diversity;
    std::vector<Individual> offspring;
    GenerationStats stats;
};

Breeding breed(std::span<const Evaluated> population, const Layering& layers, int g, const GAConfig& cfg, Rng& rng);

/// Number of individuals a fraction of the population stands for.
std::size_t fraction_count(double fraction, std::size_t population);

struct SeriesRow {
    int generation = 0;
    Fitness best;
    int theta = 0;
    int size = 0;
    std::size_t layers = 0;
};

struct RunResult {
    std::vector<SeriesRow> series;
    Evaluated best;  ///< best so far under the lexicographic ordering
    bool success = false;
    int success_generation = 0;
    std::optional<Evaluated> solution;  ///< first success
    GenerationStats totals;
};

using ProgressFn = std::function<void(const SeriesRow&)>;

RunResult run(const GAConfig& cfg, const ProgressFn& progress = {});

std::string series_csv(const std::vector<SeriesRow>& rows);

}  // namespace mtsp
