#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "mtsp/evolution.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mtsp;

namespace {

GAConfig small_config()
{
    GAConfig cfg;
    cfg.generations = 4;
    cfg.population = 24;
    cfg.genome_min = 10;
    cfg.genome_max = 20;
    cfg.labels = 6;
    cfg.sim.extent = 20;
    cfg.sim.max_tiles = 60;
    cfg.sim.max_sims = 3;
    cfg.target = square_shape(4);
    cfg.seed = corner_seed(ModelKind::TwoD);
    return cfg;
}

Layering sorted_partition(Layering l)
{
    for (auto& layer : l) std::sort(layer.begin(), layer.end());
    return l;
}

}  // namespace

TEST_CASE("fitness worked values")
{
    CHECK(fitness_f(8, 25) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(fitness_f(24, 25) == 0.0);
    CHECK(fitness_f(0, 1) == 0.0);
    CHECK(fitness_g(25, 25, 25) == 1.0);
    CHECK(std::abs(fitness_g(1, 1, 25) - 2.0 / 26.0) < 1e-12);
    CHECK(std::abs(fitness_g(20, 30, 25) - 40.0 / 55.0) < 1e-12);
    CHECK(fitness_h(0, 0, 10, 1) == 0.0);
    CHECK(fitness_h(3, 0, 10, 4) == 1.0);
    CHECK(std::abs(fitness_h(8, 9, 25, 1) - 0.96) < 1e-12);
}

TEST_CASE("dominance worked values and properties")
{
    CHECK(dominates({0.9, 0.5, 0.1}, {0.8, 0.5, 0.9}));
    CHECK(dominates({0.8, 0.5, 0.6}, {0.8, 0.5, 0.4}));
    CHECK_FALSE(dominates({0.9, 0.4, 0.5}, {0.8, 0.5, 0.5}));
    CHECK_FALSE(dominates({0.8, 0.5, 0.5}, {0.9, 0.4, 0.5}));

    Rng rng(2);
    const auto pop = test::random_fitness(rng, 60, 4);
    for (const auto& x : pop) {
        CHECK_FALSE(dominates(x, x));
        for (const auto& y : pop)
            if (dominates(x, y)) CHECK_FALSE(dominates(y, x));
    }
    // acyclic: the transitive closure never returns to its start
    const std::size_t n = pop.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) reach[i][j] = dominates(pop[i], pop[j]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    for (std::size_t i = 0; i < n; ++i) CHECK_FALSE(reach[i][i]);
}

TEST_CASE("layering")
{
    CHECK(build_layers(std::vector<Fitness>(5, Fitness{0.5, 0.5, 0.5})).size() == 1);
    std::vector<Fitness> chain;
    for (int k = 0; k < 7; ++k) chain.push_back({0.1 * k, 0.1 * k, 0.0});
    const auto layers = build_layers(chain);
    REQUIRE(layers.size() == 7);
    CHECK(layers.front() == std::vector<std::size_t>{6});

    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        const auto pop = test::random_fitness(rng, 1 + uniform_index(rng, 120), trial % 2 ? 3 : 12);
        const auto fast = build_layers(pop);
        CHECK(sorted_partition(fast) == sorted_partition(test::naive_layers(pop)));
        // layer structure
        for (std::size_t l = 0; l < fast.size(); ++l)
            for (const auto i : fast[l]) {
                for (const auto j : fast[l]) CHECK_FALSE(dominates(pop[j], pop[i]));
                if (l > 0) {
                    bool covered = false;
                    for (const auto j : fast[l - 1]) covered = covered || dominates(pop[j], pop[i]);
                    CHECK(covered);
                }
            }
        // permutation invariance as a partition
        std::vector<std::size_t> perm(pop.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Fitness> shuffled;
        for (const auto i : perm) shuffled.push_back(pop[i]);
        Layering mapped;
        for (const auto& layer : build_layers(shuffled)) {
            std::vector<std::size_t> m;
            for (const auto i : layer) m.push_back(perm[i]);
            mapped.push_back(m);
        }
        CHECK(sorted_partition(mapped) == sorted_partition(fast));
    }
}

TEST_CASE("schedules and layer weights")
{
    CHECK(linear_schedule(0.3, 0.7, 1, 1000) == 0.3);
    CHECK(linear_schedule(0.3, 0.7, 1000, 1000) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::abs(linear_schedule(0.3, 0.7, 500, 1000) - (0.3 + 499 * 0.4 / 999)) < 1e-12);
    CHECK(linear_schedule(1, 30, 1, 1000) == 1.0);
    CHECK(linear_schedule(0.3, 0.7, 1, 1) == 0.3);
    CHECK(layer_weights(2, 3) == std::vector<double>{3, 1});
    CHECK(layer_weights(3, 3) == std::vector<double>{3, 2, 1});
    CHECK(layer_weights(1, 30) == std::vector<double>{1});
    for (const double w : layer_weights(5, 1)) CHECK(w == 1.0);
}

TEST_CASE("layered selection frequencies")
{
    const Layering layers{{0, 1}, {2}, {3, 4, 5}};
    const LayeredSelector sel(layers, 3);  // weights 3,2,1
    Rng rng(77);
    std::vector<long> counts(6, 0);
    for (int k = 0; k < 120000; ++k) ++counts[sel.draw(rng)];
    const std::vector<double> probs{0.25, 0.25, 1.0 / 3.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0};
    CHECK(test::chi_square_p(counts, probs) > 0.001);

    // equal weights give a uniform choice of layer
    const LayeredSelector flat(layers, 1);
    std::vector<long> c2(6, 0);
    for (int k = 0; k < 120000; ++k) ++c2[flat.draw(rng)];
    CHECK(test::chi_square_p(c2, {1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 9, 1.0 / 9, 1.0 / 9}) > 0.001);

    LayeredSelector once(layers, 5);
    std::set<std::size_t> taken;
    while (once.remaining() > 0) taken.insert(once.take(rng));
    CHECK(taken.size() == 6);
    CHECK_THROWS_AS(once.take(rng), std::logic_error);
}

TEST_CASE("crossover")
{
    Rng rng(4);
    const LabelTable table = build_label_table(8, 2);
    const Individual a = random_individual(30, 30, table, ModelKind::TwoD, 1, rng);
    const Individual b = random_individual(40, 40, table, ModelKind::TwoD, 1, rng);
    const auto same = crossover(a, {0, 29}, a, {0, 29}, rng);
    CHECK(same.first == a);
    CHECK(same.second == a);

    for (int k = 0; k < 1000; ++k) {
        const Region ra{uniform_index(rng, 30), 0};
        const Region ar{ra.first, ra.first + uniform_index(rng, 30 - ra.first)};
        const std::size_t lo = uniform_index(rng, 40);
        const Region br{lo, lo + uniform_index(rng, 40 - lo)};
        const auto r = crossover(a, ar, b, br, rng);
        CHECK(r.first.size() == 30);
        CHECK(r.second.size() == 40);
        CHECK_FALSE(r.fallback);
        // b is the longer genome, so a's region shifts by the offset
        CHECK(r.cut1 >= ar.first + r.offset);
        CHECK(r.cut1 <= ar.second + r.offset);
        CHECK(r.cut2 >= br.first);
        CHECK(r.cut2 <= br.second);
        CHECK(r.offset + 30 <= 40);
        // genes outside the cuts stay with their parent
        const std::size_t x = std::min(r.cut1, r.cut2), y = std::max(r.cut1, r.cut2);
        for (std::size_t p = 0; p < 40; ++p) {
            const bool inside = p >= x && p <= y;
            CHECK(r.second.genome[p] == (inside ? a.genome[p - r.offset] : b.genome[p]));
        }
    }
    // the genome counts are preserved whichever parent comes first
    const auto swapped = crossover(b, {0, 39}, a, {0, 29}, rng);
    CHECK(swapped.first.size() == 40);
    CHECK(swapped.second.size() == 30);
}

TEST_CASE("mutation")
{
    Rng rng(6);
    const LabelTable two = build_label_table(2, 2);
    Individual blank{{blank_tile(ModelKind::TwoD)}};
    const Individual m1 = mutate(blank, two, ModelKind::TwoD, rng);
    CHECK(m1.genome[0].lambda() == 1);
    for (int d = 0; d < 4; ++d)
        if (!m1.genome[0].side(d).is_epsilon()) {
            CHECK(m1.genome[0].side(d).id == 1);
            CHECK(m1.genome[0].side(d).polarity == Polarity::None);
        }
    CHECK(mutate(blank, build_label_table(1, 2), ModelKind::TwoD, rng) == blank);

    const LabelTable table = build_label_table(11, 2);
    const Individual base = random_individual(20, 20, table, ModelKind::TwoDR, 1, rng);
    std::vector<long> sides(4, 0);
    for (int k = 0; k < 20000; ++k) {
        const Individual m = mutate(base, table, ModelKind::TwoDR, rng);
        REQUIRE(m.size() == base.size());
        int changed = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int d = 0; d < 4; ++d)
                if (m.genome[i].side(d).id != base.genome[i].side(d).id) {
                    ++changed;
                    ++sides[static_cast<std::size_t>(d)];
                    const Label& l = m.genome[i].side(d);
                    CHECK((l.is_epsilon() ? l.polarity == Polarity::None : l.polarity != Polarity::None));
                }
        CHECK(changed == 1);
    }
    CHECK(test::chi_square_p(sides, {0.25, 0.25, 0.25, 0.25}) > 0.001);
}

TEST_CASE("random individuals")
{
    Rng rng(12);
    const LabelTable table = build_label_table(5, 2);
    std::vector<long> labels(5, 0);
    for (int k = 0; k < 2000; ++k) {
        const Individual ind = random_individual(3, 9, table, ModelKind::ThreeDR, 1, rng);
        CHECK(ind.size() >= 3);
        CHECK(ind.size() <= 9);
        for (const auto& t : ind.genome) {
            CHECK(t.side_count == 6);
            for (int d = 0; d < 6; ++d) ++labels[t.side(d).id];
        }
    }
    CHECK(test::chi_square_p(labels, std::vector<double>(5, 0.2)) > 0.001);
    const Individual none = random_individual(5, 5, table, ModelKind::TwoD, 0, rng);
    for (const auto& t : none.genome) CHECK(t.lambda() == 4);
}

TEST_CASE("crossover pair selection")
{
    Rng rng(1);
    const std::vector<Fitness> same(10, Fitness{1, 1, 0.5});
    const LayeredSelector sel(build_layers(same), 1);
    auto p = select_crossover_pair(sel, same, 0.0, 1000, rng);
    CHECK(p.accepted);
    CHECK(p.attempts == 1);
    p = select_crossover_pair(sel, same, 0.01, 1000, rng);
    CHECK_FALSE(p.accepted);
    CHECK(p.attempts == 1000);

    const std::vector<Fitness> two{{1, 1, 0.5}, {1, 1, 0.52}};
    CHECK(fitness_distance(two[0], two[1]) == doctest::Approx(0.02));
    const LayeredSelector sel2(build_layers(two), 1);
    p = select_crossover_pair(sel2, two, 0.01, 1000, rng);
    CHECK(p.accepted);
    CHECK(p.first != p.second);
}

TEST_CASE("fraction counts")
{
    CHECK(fraction_count(0.1, 1000) == 100);
    CHECK(fraction_count(0.05, 1000) == 50);
    CHECK(fraction_count(0.1, 15) == 2);
    CHECK(fraction_count(0.0, 15) == 0);
}

TEST_CASE("breeding keeps the population size")
{
    GAConfig cfg = small_config();
    cfg.population = 40;
    cfg.elitist_fraction = 0.1;
    cfg.diversity_fraction = 0.05;
    Rng rng(3);
    const LabelTable table = build_label_table(7, 2);
    std::vector<Individual> inds;
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < cfg.population; ++i) {
        inds.push_back(random_individual(10, 20, table, ModelKind::TwoD, 1, rng));
        seeds.push_back(static_cast<std::uint64_t>(i));
    }
    const auto pop = evaluate_all(inds, cfg, seeds, 1);
    std::vector<Fitness> fit;
    for (const auto& e : pop) fit.push_back(e.fitness);
    const auto layers = build_layers(fit);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = breed(pop, layers, 1 + trial % cfg.generations, cfg, rng);
        CHECK(b.elites.size() == 4);
        CHECK(b.diversity.size() == 2);
        CHECK(b.elites.size() + b.diversity.size() + b.offspring.size() == 40);
        std::set<std::size_t> e(b.elites.begin(), b.elites.end());
        CHECK(e.size() == b.elites.size());
        for (const auto d : b.diversity) CHECK(e.count(d) == 0);
        std::set<std::size_t> d(b.diversity.begin(), b.diversity.end());
        CHECK(d.size() == b.diversity.size());
        for (const auto& o : b.offspring) {
            CHECK(o.size() >= 10);
            CHECK(o.size() <= 20);
        }
    }
    cfg.crossover_p_initial = cfg.crossover_p_final = 0.0;
    const auto b = breed(pop, layers, 1, cfg, rng);
    CHECK(b.stats.crossovers == 0);
    CHECK(b.stats.mutations == b.offspring.size());
}

TEST_CASE("type bounds")
{
    CHECK(type_bound(square_shape(5), 2, ModelKind::TwoD) == 9);
    CHECK(type_bound(square_shape(5), 2, ModelKind::TwoDR) == 9);
    CHECK(type_bound(square_shape(23), 2, ModelKind::TwoD) == 27);
    CHECK(type_bound(square_shape(25), 2, ModelKind::TwoD) == 27);
    CHECK(type_bound(square_shape(4), 1, ModelKind::TwoD) == 16);
    CHECK_FALSE(type_bound(square_shape(5), 3, ModelKind::TwoD).has_value());
    CHECK_FALSE(type_bound(square_shape(2), 2, ModelKind::TwoD).has_value());
    CHECK_FALSE(type_bound(cube_shape(5), 2, ModelKind::ThreeDR).has_value());
    CHECK_FALSE(type_bound(shape_from_cells({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, 2), 2, ModelKind::TwoD));
}

TEST_CASE("hand-built square evaluates as a success")
{
    const auto f = test::load("data/square5-2d.tiles");
    GAConfig cfg;
    cfg.seed = *f.seed;
    const Evaluated e = evaluate(test::individual_of(f), cfg, 5);
    CHECK(e.fitness.g == 1.0);
    CHECK(e.fitness.h == 1.0);
    CHECK(e.fitness.f == doctest::Approx(1.0 - 10.0 / 25.0));
    // ten types exceed the bound of nine
    CHECK_FALSE(e.success);
    GAConfig tau1 = cfg;
    tau1.target = square_shape(5);
    CHECK(type_bound(tau1.target, 1, ModelKind::TwoD) == 25);
}

TEST_CASE("configuration validation")
{
    GAConfig cfg = small_config();
    CHECK_NOTHROW(validate(cfg));
    auto bad = [&](auto change) {
        GAConfig c = cfg;
        change(c);
        CHECK_THROWS_AS(validate(c), std::invalid_argument);
    };
    bad([](GAConfig& c) { c.sim.tau = 0; });
    bad([](GAConfig& c) { c.elitist_fraction = 0.6; c.diversity_fraction = 0.5; });
    bad([](GAConfig& c) { c.crossover_p_final = 1.5; });
    bad([](GAConfig& c) { c.layer_weight_initial = 0.5; });
    bad([](GAConfig& c) { c.genome_min = 30; });
    bad([](GAConfig& c) { c.sim.extent = 4; });
    bad([](GAConfig& c) { c.target = cube_shape(2); });
    bad([](GAConfig& c) { c.population = 1; });
}

TEST_CASE("runs are reproducible and independent of workers")
{
    GAConfig cfg = small_config();
    cfg.rng_seed = 42;
    const RunResult a = run(cfg);
    cfg.workers = 4;
    const RunResult b = run(cfg);
    CHECK(series_csv(a.series) == series_csv(b.series));
    CHECK(a.best.outcome.trace == b.best.outcome.trace);
    CHECK(a.series.size() == 4);
    for (std::size_t i = 1; i < a.series.size(); ++i) CHECK(a.series[i].best.g >= a.series[i - 1].best.g);
    cfg.rng_seed = 43;
    CHECK(series_csv(run(cfg).series) != series_csv(a.series));
}

TEST_CASE("a single generation only evaluates the initial population")
{
    GAConfig cfg = small_config();
    cfg.generations = 1;
    const RunResult r = run(cfg);
    CHECK(r.series.size() == 1);
    CHECK(r.totals.crossovers + r.totals.mutations == 0);
    CHECK(series_csv(r.series).rfind("generation,g,h,f,theta,omega_size,layers\n1,", 0) == 0);
}
