#include <iostream>

#include "CLI11.hpp"
#include "mtsp/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Evolutionary search for minimum tile sets that self-assemble a target shape"};
    app.require_subcommand(1);

    mtsp::cli::SolveOptions solve;
    auto* s = app.add_subcommand("solve", "run the evolutionary search");
    s->add_option("--config", solve.config, "experiment file")->required();
    s->add_option("--seed", solve.seed, "master rng seed, overrides the file");
    s->add_option("--model", solve.model, "2d, 2dr or 3dr, overrides the file");
    s->add_option("--workers", solve.workers, "evaluation threads; results do not depend on it");
    s->add_option("--out", solve.out, "artifact directory");
    s->add_flag("--quiet", solve.quiet, "no per-generation progress");

    mtsp::cli::VerifyOptions verify;
    auto* v = app.add_subcommand("verify", "check termination, unicity and fullness exhaustively");
    v->add_option("tiles", verify.tiles, "tile-set file")->required();
    v->add_option("--shape", verify.shape, "square:<n>, cube:<n> or file:<path>");
    v->add_option("--model", verify.model, "2d, 2dr or 3dr");
    v->add_option("--tau", verify.tau, "temperature");
    v->add_option("--bound", verify.bound, "largest object size allowed");
    v->add_option("--budget", verify.budget, "distinct objects explored before giving up");

    mtsp::cli::ReplayOptions replay;
    auto* r = app.add_subcommand("replay", "simulate a tile set once and print the trace");
    r->add_option("tiles", replay.tiles, "tile-set file")->required();
    r->add_option("--config", replay.config, "experiment file for lattice and temperature");
    r->add_option("--model", replay.model, "2d, 2dr or 3dr");
    r->add_option("--tau", replay.tau, "temperature");
    r->add_option("--seed", replay.seed, "rng seed");
    r->add_option("--out", replay.out, "write the trace here");

    std::string run_dir;
    auto* e = app.add_subcommand("export-plots", "write plot-ready best-so-far series");
    e->add_option("run_dir", run_dir, "directory written by solve")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : mtsp::cli::kInvalidInput;
    }

    if (s->parsed()) return mtsp::cli::solve(solve, std::cout, std::cerr);
    if (v->parsed()) return mtsp::cli::verify(verify, std::cout, std::cerr);
    if (r->parsed()) return mtsp::cli::replay(replay, std::cout, std::cerr);
    return mtsp::cli::export_plots(run_dir, std::cout, std::cerr);
}
