#include "mtsp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "mtsp/config.hpp"
#include "mtsp/evolution.hpp"
#include "mtsp/tileset_io.hpp"
#include "mtsp/verifier.hpp"

namespace mtsp::cli {

namespace fs = std::filesystem;

namespace {

// Maps the library's exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write " + path.string());
    f << text;
    if (!f) throw std::ios_base::failure("cannot write " + path.string());
}

ModelKind model_or(const std::optional<std::string>& name, ModelKind fallback)
{
    if (!name) return fallback;
    const auto m = parse_model(*name);
    if (!m) throw std::invalid_argument("unknown model '" + *name + "'");
    return *m;
}

// Used types of an evaluated individual, renumbered, with the trace rewritten to match.
struct Solution {
    std::vector<TileType> tiles;
    Trace trace;
};

Solution extract(const Evaluated& e)
{
    Solution s;
    std::vector<int> index(e.individual.genome.size(), -1);
    for (std::size_t i = 0; i < e.individual.genome.size(); ++i)
        if (e.outcome.used[i]) {
            index[i] = static_cast<int>(s.tiles.size());
            s.tiles.push_back(e.individual.genome[i]);
        }
    s.trace = e.outcome.trace;
    for (auto& a : s.trace) a.type = index[static_cast<std::size_t>(a.type)];
    return s;
}

std::string summary_text(const RunResult& r, const Evaluated& shown, const GAConfig& cfg, double seconds)
{
    std::ostringstream o;
    const auto& m = shown.metrics;
    o << "success = " << (r.success ? "true" : "false") << '\n';
    o << "success_generation = " << r.success_generation << '\n';
    o << "generations_run = " << r.series.size() << '\n';
    o << "rng_seed = " << cfg.rng_seed << '\n';
    o << "model = " << to_string(cfg.sim.model) << '\n';
    o << "tile_types = " << 1 + m.theta << '\n';
    o << "g = " << shown.fitness.g << '\n';
    o << "h = " << shown.fitness.h << '\n';
    o << "f = " << shown.fitness.f << '\n';
    o << "theta = " << m.theta << '\n';
    o << "omega_size = " << m.size << '\n';
    o << "kappa = " << m.kappa << '\n';
    o << "alpha = " << m.alpha << '\n';
    o << "bonds = " << m.bonds << '\n';
    o << "max_bonds = " << m.max_bonds << '\n';
    o << "terminal = " << (m.terminal ? "true" : "false") << '\n';
    o << "crossovers = " << r.totals.crossovers << '\n';
    o << "mutations = " << r.totals.mutations << '\n';
    o << "crossover_fallbacks = " << r.totals.crossover_fallbacks << '\n';
    o << "distance_exhausted = " << r.totals.distance_exhausted << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", seconds);
    o << "wall_seconds = " << buf << '\n';
    return o.str();
}

}  // namespace

int solve(const SolveOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        ExperimentConfig cfg = load_config(opts.config);
        if (opts.seed) override_option(cfg, "rng_seed", std::to_string(*opts.seed));
        if (opts.model) override_option(cfg, "model", *opts.model);
        if (opts.workers < 1) throw std::invalid_argument("workers must be at least 1");
        cfg.ga.workers = opts.workers;

        const fs::path dir(opts.out);
        fs::create_directories(dir);
        write_file(dir / "config.cfg", format_config(cfg));

        const auto start = std::chrono::steady_clock::now();
        const RunResult r = run(cfg.ga, [&](const SeriesRow& row) {
            if (opts.quiet) return;
            char buf[160];
            std::snprintf(buf, sizeof buf, "gen %d g=%.4f h=%.4f f=%.4f types=%d size=%d layers=%zu\n", row.generation,
                          row.best.g, row.best.h, row.best.f, 1 + row.theta, row.size, row.layers);
            out << buf << std::flush;
        });
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const Evaluated& shown = r.solution ? *r.solution : r.best;
        const Solution s = extract(shown);
        const int dims = dimensions(cfg.ga.sim.model);
        write_file(dir / "series.csv", series_csv(r.series));
        write_file(dir / "best.tiles", format_tileset(s.tiles, &shown.outcome.seed));
        write_file(dir / "trace.txt", format_trace(s.trace, dims));
        write_file(dir / "summary.txt", summary_text(r, shown, cfg.ga, seconds));
        out << (r.success ? "success" : "no success") << " after " << r.series.size() << " generations; "
            << 1 + shown.metrics.theta << " tile types; artifacts in " << dir.string() << '\n';
        return r.success ? kSuccess : kConstraintFailure;
    });
}

int verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ModelKind m = model_or(opts.model, ModelKind::TwoD);
        const TileSetFile f = read_tileset_file(opts.tiles);
        check_tileset_model(f, m);
        const Shape target = parse_shape_spec(opts.shape, fs::current_path());
        if (target.dims != dimensions(m)) throw std::invalid_argument("shape dimension does not match the model");
        mtsp::VerifyOptions vo;
        vo.bound = opts.bound.value_or(2 * static_cast<int>(target.size()));
        vo.state_budget = opts.budget;
        const Seed seed = f.seed ? *f.seed : corner_seed(m);
        const VerifyReport r = exhaustive_verify(f.tiles, seed, target, opts.tau, m, vo);
        out << format_report(r, dimensions(m));
        const bool failed = r.termination == Verdict::Fail || r.unicity == Verdict::Fail || r.fullness == Verdict::Fail;
        if (failed) return kConstraintFailure;
        if (r.termination != Verdict::Pass || r.unicity != Verdict::Pass || r.fullness != Verdict::Pass)
            return kInconclusive;
        return kSuccess;
    });
}

int replay(const ReplayOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        SimConfig sim;
        std::optional<Seed> config_seed;
        if (opts.config) {
            ExperimentConfig cfg = load_config(*opts.config);
            if (opts.model) override_option(cfg, "model", *opts.model);
            sim = cfg.ga.sim;
            if (cfg.values.at("seed_tiles") != "corner") config_seed = cfg.ga.seed;
        } else {
            sim.model = model_or(opts.model, ModelKind::TwoD);
        }
        if (opts.tau) sim.tau = *opts.tau;
        if (sim.tau < 1) throw std::invalid_argument("tau must be at least 1");
        const TileSetFile f = read_tileset_file(opts.tiles);
        check_tileset_model(f, sim.model);
        const Seed seed = f.seed ? *f.seed : config_seed.value_or(corner_seed(sim.model));
        Rng rng = make_rng(opts.seed, {0});
        const SimOutcome o = simulate_once(Individual{f.tiles}, seed, sim, rng);
        const std::string text = format_trace(o.trace, dimensions(sim.model));
        if (opts.out) {
            write_file(*opts.out, text);
            out << o.trace.size() << " accretions, " << (o.terminal ? "terminal" : "not terminal") << '\n';
        } else {
            out << text;
        }
        return kSuccess;
    });
}

int export_plots(const std::string& run_dir, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const fs::path series = fs::path(run_dir) / "series.csv";
        std::ifstream in(series);
        if (!in) throw std::ios_base::failure("cannot open " + series.string());
        std::string line;
        if (!std::getline(in, line) || line != "generation,g,h,f,theta,omega_size,layers")
            throw std::invalid_argument(series.string() + ": unexpected header");
        std::string table = "# generation            g            h            f\n";
        double last_g = -1.0;
        int rows = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            if (cells.size() != 7) throw std::invalid_argument(series.string() + ": malformed row '" + line + "'");
            const int gen = std::stoi(cells[0]);
            const double g = std::stod(cells[1]);
            const double h = std::stod(cells[2]);
            const double f = std::stod(cells[3]);
            if (g < last_g)
                throw std::invalid_argument(series.string() + ": g decreases at generation " + std::to_string(gen));
            last_g = g;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%12d %12.8f %12.8f %12.8f\n", gen, g, h, f);
            table += buf;
            ++rows;
        }
        if (rows == 0) throw std::invalid_argument(series.string() + ": no rows");
        const fs::path target = fs::path(run_dir) / "plots.txt";
        write_file(target, table);
        out << rows << " rows written to " << target.string() << '\n';
        return kSuccess;
    });
}

}  // namespace mtsp::cli
