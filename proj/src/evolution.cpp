#include "mtsp/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mtsp {

// ---------------------------------------------------------------------------
// Fitness and dominance
// ---------------------------------------------------------------------------

double fitness_f(int theta, int size) { return 1.0 - static_cast<double>(1 + theta) / static_cast<double>(size); }

double fitness_g(int kappa, int size, int target_size)
{
    return 2.0 * static_cast<double>(kappa) / static_cast<double>(size + target_size);
}

double fitness_h(int theta, long alpha, int size, int rho)
{
    if (theta == 0) return 0.0;
    return 1.0 - static_cast<double>(alpha) / (static_cast<double>(rho) * size * (1 + theta));
}

bool dominates(const Fitness& x, const Fitness& y)
{
    return (x.g > y.g && x.h >= y.h) || (x.g >= y.g && x.h > y.h) || (x.g == y.g && x.h == y.h && x.f > y.f);
}

bool better_lexicographic(const Fitness& x, const Fitness& y)
{
    if (x.g != y.g) return x.g > y.g;
    if (x.h != y.h) return x.h > y.h;
    return x.f > y.f;
}

double fitness_distance(const Fitness& x, const Fitness& y)
{
    return std::sqrt((x.g - y.g) * (x.g - y.g) + (x.h - y.h) * (x.h - y.h) + (x.f - y.f) * (x.f - y.f));
}

Layering build_layers(std::span<const Fitness> population)
{
    // Each individual counts how many others dominate it; a layer is peeled
    // off once its members' counts reach zero.
    const std::size_t n = population.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(population[i], population[j])) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (dominates(population[j], population[i])) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    Layering layers;
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) front.push_back(i);
    while (!front.empty()) {
        std::vector<std::size_t> next;
        for (const auto i : front)
            for (const auto j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        layers.push_back(std::move(front));
        front = std::move(next);
    }
    return layers;
}

// ---------------------------------------------------------------------------
// Schedules and layered selection
// ---------------------------------------------------------------------------

double linear_schedule(double first, double last, int g, int generations)
{
    if (generations <= 1) return first;
    return first + static_cast<double>(g - 1) * (last - first) / static_cast<double>(generations - 1);
}

std::vector<double> layer_weights(std::size_t layers, double w)
{
    if (layers == 0) return {};
    if (layers == 1) return {1.0};
    std::vector<double> out(layers);
    for (std::size_t l = 1; l <= layers; ++l)
        out[l - 1] = w - static_cast<double>(l - 1) * (w - 1.0) / static_cast<double>(layers - 1);
    return out;
}

LayeredSelector::LayeredSelector(const Layering& layers, double w) : layers_(layers), weights_(layer_weights(layers.size(), w))
{
    for (const auto& l : layers_) remaining_ += l.size();
    if (remaining_ == 0) throw std::invalid_argument("selection from an empty population");
}

std::size_t LayeredSelector::draw(Rng& rng) const
{
    std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
    const auto& layer = layers_[pick(rng)];
    return layer[uniform_index(rng, layer.size())];
}

std::size_t LayeredSelector::take(Rng& rng)
{
    if (remaining_ == 0) throw std::logic_error("selector exhausted");
    std::vector<double> w(weights_);
    for (std::size_t l = 0; l < layers_.size(); ++l)
        if (layers_[l].empty()) w[l] = 0.0;
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    auto& layer = layers_[pick(rng)];
    const std::size_t k = uniform_index(rng, layer.size());
    const std::size_t chosen = layer[k];
    layer.erase(layer.begin() + static_cast<std::ptrdiff_t>(k));
    --remaining_;
    return chosen;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

CrossoverResult crossover(const Individual& a, Region active_a, const Individual& b, Region active_b, Rng& rng)
{
    if (a.genome.empty() || b.genome.empty()) throw std::invalid_argument("crossover of an empty genome");
    const bool a_long = a.size() >= b.size();
    const std::size_t long_len = a_long ? a.size() : b.size();
    const std::size_t short_len = a_long ? b.size() : a.size();

    // active regions in the longer genome's coordinates for offset o
    auto region_at = [&](Region r, bool is_long, std::size_t o) { return is_long ? r : Region{r.first + o, r.second + o}; };
    auto meet = [](Region x, Region y) -> std::optional<Region> {
        const std::size_t lo = std::max(x.first, y.first);
        const std::size_t hi = std::min(x.second, y.second);
        if (lo > hi) return std::nullopt;
        return Region{lo, hi};
    };

    std::vector<std::size_t> valid;
    for (std::size_t o = 0; o + short_len <= long_len; ++o) {
        const Region frame{o, o + short_len - 1};
        if (meet(frame, region_at(active_a, a_long, o)) && meet(frame, region_at(active_b, !a_long, o)))
            valid.push_back(o);
    }
    CrossoverResult res;
    res.fallback = valid.empty();
    res.offset = res.fallback ? uniform_index(rng, long_len - short_len + 1) : valid[uniform_index(rng, valid.size())];
    const Region frame{res.offset, res.offset + short_len - 1};
    const Region ra = res.fallback ? frame : *meet(frame, region_at(active_a, a_long, res.offset));
    const Region rb = res.fallback ? frame : *meet(frame, region_at(active_b, !a_long, res.offset));
    res.cut1 = ra.first + uniform_index(rng, ra.second - ra.first + 1);
    res.cut2 = rb.first + uniform_index(rng, rb.second - rb.first + 1);

    res.first = a;
    res.second = b;
    auto& lg = a_long ? res.first.genome : res.second.genome;
    auto& sh = a_long ? res.second.genome : res.first.genome;
    for (std::size_t p = std::min(res.cut1, res.cut2); p <= std::max(res.cut1, res.cut2); ++p)
        std::swap(lg[p], sh[p - res.offset]);
    return res;
}

Individual mutate(const Individual& ind, const LabelTable& table, ModelKind m, Rng& rng)
{
    if (ind.genome.empty()) throw std::invalid_argument("mutation of an empty genome");
    Individual out = ind;
    TileType& t = out.genome[uniform_index(rng, out.genome.size())];
    Label& side = t.side(static_cast<int>(uniform_index(rng, t.side_count)));
    const std::size_t n = table.size();
    const bool current_in_table = side.id < n;
    const std::size_t choices = current_in_table ? n - 1 : n;
    if (choices == 0) return out;
    std::size_t k = uniform_index(rng, choices);
    if (current_in_table && k >= side.id) ++k;
    side = table[k];
    if (has_polarity(m) && !side.is_epsilon())
        side.polarity = uniform_index(rng, 2) == 0 ? Polarity::Plus : Polarity::Minus;
    return out;
}

Individual random_individual(std::size_t min_size, std::size_t max_size, const LabelTable& table, ModelKind m,
                             double epsilon_weight, Rng& rng)
{
    if (min_size < 1 || min_size > max_size) throw std::invalid_argument("bad genome size bounds");
    std::vector<double> weights(table.size(), 1.0);
    weights[0] = epsilon_weight;
    if (table.size() == 1) weights[0] = 1.0;
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    const std::size_t size = min_size + uniform_index(rng, max_size - min_size + 1);
    Individual ind;
    ind.genome.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        TileType t = blank_tile(m);
        for (int d = 0; d < t.side_count; ++d) {
            Label l = table[pick(rng)];
            if (has_polarity(m) && !l.is_epsilon())
                l.polarity = uniform_index(rng, 2) == 0 ? Polarity::Plus : Polarity::Minus;
            t.side(d) = l;
        }
        ind.genome.push_back(t);
    }
    return ind;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::size_t fraction_count(double fraction, std::size_t population)
{
    // the guard keeps products such as 0.1 * 1000 from rounding up to 101
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(population) - 1e-9));
}

void validate(const GAConfig& cfg)
{
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (cfg.generations < 1) fail("generations must be at least 1");
    if (cfg.population < 2) fail("population must be at least 2");
    if (cfg.elitist_fraction < 0 || cfg.elitist_fraction > 1) fail("elitist_fraction must lie in [0,1]");
    if (cfg.diversity_fraction < 0 || cfg.diversity_fraction > 1) fail("diversity_fraction must lie in [0,1]");
    if (cfg.elitist_fraction + cfg.diversity_fraction >= 1) fail("elitist and diversity fractions must sum below 1");
    const auto p = static_cast<std::size_t>(cfg.population);
    if (fraction_count(cfg.elitist_fraction, p) + fraction_count(cfg.diversity_fraction, p) >= p)
        fail("elitist and diversity copies leave no room for offspring");
    for (const double v : {cfg.crossover_p_initial, cfg.crossover_p_final})
        if (v < 0 || v > 1) fail("crossover probabilities must lie in [0,1]");
    if (cfg.layer_weight_initial < 1 || cfg.layer_weight_final < 1) fail("layer weights must be at least 1");
    if (cfg.max_crossover_attempts < 1) fail("max_crossover_attempts must be at least 1");
    if (cfg.min_crossover_distance < 0) fail("min_crossover_distance must be nonnegative");
    if (cfg.genome_min < 1 || cfg.genome_max < cfg.genome_min) fail("genome size bounds must satisfy 1 <= min <= max");
    if (cfg.labels < 0 || cfg.labels >= Label::kWildcardId - 1) fail("labels out of range");
    if (cfg.epsilon_weight < 0) fail("epsilon_weight must be nonnegative");
    if (cfg.workers < 1) fail("workers must be at least 1");
    if (cfg.sim.tau < 1) fail("tau must be at least 1");
    if (cfg.sim.max_tiles < 1) fail("max_tiles must be at least 1");
    if (cfg.sim.max_sims < 1) fail("max_sims must be at least 1");
    if (cfg.sim.extent < 3) fail("lattice must be at least 3");
    if (cfg.target.cells.empty()) fail("target shape is empty");
    if (cfg.target.dims != dimensions(cfg.sim.model)) fail("target shape dimension does not match the model");
    int span = 0;
    for (const auto& c : cfg.target.cells) span = std::max({span, c.x + 1, c.y + 1, c.z + 1});
    if (cfg.sim.extent <= span) fail("lattice must be larger than the target shape");
    validate_seed(cfg.seed, cfg.sim.model);
}

std::optional<int> type_bound(const Shape& target, int tau, ModelKind m)
{
    if (dimensions(m) != 2 || target.dims != 2) return std::nullopt;
    const auto n = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(target.size()))));
    if (n * n != static_cast<long long>(target.size())) return std::nullopt;
    for (const auto& c : target.cells)
        if (c.x >= n || c.y >= n) return std::nullopt;
    if (tau == 1) return static_cast<int>(n * n);
    if (tau != 2 || n < 3) return std::nullopt;
    if (n <= 23) return static_cast<int>(n + 4);
    if (n < 22 + (1LL << 23)) {
        int lg = 0;
        while ((1LL << lg) < n) ++lg;
        return 22 + lg;
    }
    int iterations = 0;
    for (double v = static_cast<double>(n); v > 1.0; v = std::log2(v)) ++iterations;
    return 22 * iterations;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Evaluated evaluate(const Individual& ind, const GAConfig& cfg, std::uint64_t stream_seed)
{
    Evaluated e;
    e.individual = ind;
    e.outcome = simulate(ind, cfg.seed, cfg.sim, stream_seed);
    e.metrics = compute_metrics(e.outcome, ind, cfg.target, cfg.sim, cfg.alpha_mode);
    const auto& r = e.metrics;
    const int target_size = static_cast<int>(cfg.target.size());
    e.fitness.f = fitness_f(r.theta, r.size);
    e.fitness.g = fitness_g(r.kappa, r.size, target_size);
    e.fitness.h = fitness_h(r.theta, r.alpha, r.size, orientation_count(cfg.sim.model));
    const auto bound = type_bound(cfg.target, cfg.sim.tau, cfg.sim.model);
    e.success = r.theta > 0 && r.alpha == 0 && r.terminal && r.kappa == r.size && r.size == target_size &&
                r.fullness && (!bound || 1 + r.theta <= *bound);
    return e;
}

std::vector<Evaluated> evaluate_all(std::vector<Individual> individuals, const GAConfig& cfg,
                                    std::span<const std::uint64_t> stream_seeds, int workers)
{
    if (stream_seeds.size() != individuals.size()) throw std::invalid_argument("one stream seed per individual");
    std::vector<Evaluated> out(individuals.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < individuals.size(); i = next++) {
            try {
                out[i] = evaluate(individuals[i], cfg, stream_seeds[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), individuals.size());
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

// ---------------------------------------------------------------------------
// Generational loop
// ---------------------------------------------------------------------------

PairChoice select_crossover_pair(const LayeredSelector& selector, std::span<const Fitness> fitness, double min_dist,
                                 int max_attempts, Rng& rng)
{
    PairChoice c;
    for (c.attempts = 1; c.attempts <= max_attempts; ++c.attempts) {
        c.first = selector.draw(rng);
        c.second = selector.draw(rng);
        if (fitness_distance(fitness[c.first], fitness[c.second]) >= min_dist) {
            c.accepted = true;
            return c;
        }
    }
    c.attempts = max_attempts;
    return c;
}

Breeding breed(std::span<const Evaluated> population, const Layering& layers, int g, const GAConfig& cfg, Rng& rng)
{
    const std::size_t p = population.size();
    const double w = linear_schedule(cfg.layer_weight_initial, cfg.layer_weight_final, g, cfg.generations);
    const double px = linear_schedule(cfg.crossover_p_initial, cfg.crossover_p_final, g, cfg.generations);
    const LabelTable table = build_label_table(static_cast<std::size_t>(cfg.labels) + 1, cfg.sim.tau);
    const std::size_t n_elite = std::min(fraction_count(cfg.elitist_fraction, p), p);
    const std::size_t n_div = std::min(fraction_count(cfg.diversity_fraction, p), p - n_elite);

    Breeding b;
    LayeredSelector elite_pick(layers, w);
    for (std::size_t k = 0; k < n_elite; ++k) b.elites.push_back(elite_pick.take(rng));

    std::vector<bool> is_elite(p, false);
    for (const auto i : b.elites) is_elite[i] = true;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < p; ++i)
        if (!is_elite[i]) rest.push_back(i);
    for (std::size_t k = 0; k < n_div; ++k) {
        const std::size_t j = k + uniform_index(rng, rest.size() - k);
        std::swap(rest[k], rest[j]);
        b.diversity.push_back(rest[k]);
    }

    std::vector<Fitness> fitness;
    fitness.reserve(p);
    for (const auto& e : population) fitness.push_back(e.fitness);
    const LayeredSelector parents(layers, w);
    const std::size_t wanted = p - n_elite - n_div;
    while (b.offspring.size() < wanted) {
        if (uniform01(rng) < px) {
            const PairChoice pair =
                select_crossover_pair(parents, fitness, cfg.min_crossover_distance, cfg.max_crossover_attempts, rng);
            const Evaluated& x = population[pair.first];
            const Evaluated& y = population[pair.second];
            CrossoverResult cr =
                crossover(x.individual, x.metrics.active_region, y.individual, y.metrics.active_region, rng);
            ++b.stats.crossovers;
            if (cr.fallback) ++b.stats.crossover_fallbacks;
            if (!pair.accepted) ++b.stats.distance_exhausted;
            b.offspring.push_back(std::move(cr.first));
            if (b.offspring.size() < wanted) b.offspring.push_back(std::move(cr.second));
        } else {
            b.offspring.push_back(mutate(population[parents.draw(rng)].individual, table, cfg.sim.model, rng));
            ++b.stats.mutations;
        }
    }
    b.stats.elites = n_elite;
    b.stats.diversity = n_div;
    return b;
}

namespace {

std::vector<std::uint64_t> evaluation_seeds(const GAConfig& cfg, int g, std::size_t from, std::size_t to)
{
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = from; s < to; ++s)
        seeds.push_back(derive_seed(cfg.rng_seed, {1, static_cast<std::uint64_t>(g), s}));
    return seeds;
}

}  // namespace

RunResult run(const GAConfig& cfg, const ProgressFn& progress)
{
    validate(cfg);
    const auto p = static_cast<std::size_t>(cfg.population);
    const LabelTable table = build_label_table(static_cast<std::size_t>(cfg.labels) + 1, cfg.sim.tau);

    std::vector<Individual> initial;
    for (std::size_t s = 0; s < p; ++s) {
        Rng rng = make_rng(cfg.rng_seed, {0, s});
        initial.push_back(random_individual(static_cast<std::size_t>(cfg.genome_min),
                                            static_cast<std::size_t>(cfg.genome_max), table, cfg.sim.model,
                                            cfg.epsilon_weight, rng));
    }
    const auto seeds = evaluation_seeds(cfg, 1, 0, p);
    std::vector<Evaluated> pop = evaluate_all(std::move(initial), cfg, seeds, cfg.workers);

    RunResult result;
    bool have_best = false;
    for (int g = 1; g <= cfg.generations; ++g) {
        std::vector<Fitness> fitness;
        for (const auto& e : pop) fitness.push_back(e.fitness);
        const Layering layers = build_layers(fitness);

        for (const auto& e : pop)
            if (!have_best || better_lexicographic(e.fitness, result.best.fitness)) {
                result.best = e;
                have_best = true;
            }
        if (!result.success)
            for (const auto& e : pop)
                if (e.success) {
                    result.success = true;
                    result.success_generation = g;
                    result.solution = e;
                    break;
                }
        SeriesRow row{g, result.best.fitness, result.best.metrics.theta, result.best.metrics.size, layers.size()};
        result.series.push_back(row);
        if (progress) progress(row);
        if (g == cfg.generations || (result.success && cfg.stop_on_success)) break;

        Rng rng = make_rng(cfg.rng_seed, {2, static_cast<std::uint64_t>(g)});
        Breeding b = breed(pop, layers, g, cfg, rng);
        auto& t = result.totals;
        t.elites += b.stats.elites;
        t.diversity += b.stats.diversity;
        t.crossovers += b.stats.crossovers;
        t.mutations += b.stats.mutations;
        t.crossover_fallbacks += b.stats.crossover_fallbacks;
        t.distance_exhausted += b.stats.distance_exhausted;

        std::vector<Evaluated> next;
        next.reserve(p);
        for (const auto i : b.elites) next.push_back(pop[i]);
        for (const auto i : b.diversity) next.push_back(pop[i]);
        const auto child_seeds = evaluation_seeds(cfg, g + 1, next.size(), p);
        for (auto& e : evaluate_all(std::move(b.offspring), cfg, child_seeds, cfg.workers)) next.push_back(std::move(e));
        pop = std::move(next);
    }
    return result;
}

std::string series_csv(const std::vector<SeriesRow>& rows)
{
    std::string out = "generation,g,h,f,theta,omega_size,layers\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%d,%d,%zu\n", r.generation, r.best.g, r.best.h, r.best.f,
                      r.theta, r.size, r.layers);
        out += buf;
    }
    return out;
}

}  // namespace mtsp
