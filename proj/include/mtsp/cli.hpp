#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace mtsp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConstraintFailure = 1,
    kInvalidInput = 2,
    kIoError = 3,
    kInconclusive = 4,
};

struct SolveOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    int workers = 1;
    std::string out = "mtsp-run";
    bool quiet = false;
};

/// Runs the evolutionary search and writes config.cfg, series.csv,
/// best.tiles, trace.txt and summary.txt into the output directory. Exits
/// with kSuccess when a solution was found, kConstraintFailure otherwise.
int solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    std::string tiles;
    std::string shape = "square:5";
    std::optional<std::string> model;  ///< 2d when unset
    int tau = 2;
    std::optional<int> bound;          ///< twice the target size when unset
    std::size_t budget = 2'000'000;
};

int verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct ReplayOptions {
    std::string tiles;
    std::optional<std::string> config;
    std::optional<std::string> model;
    std::optional<int> tau;
    std::uint64_t seed = 1;
    std::optional<std::string> out;  ///< trace file; standard output when unset
};

/// One simulation of the tile set; prints the trace.
int replay(const ReplayOptions& opts, std::ostream& out, std::ostream& err);

/// Writes plots.txt with aligned generation/g/h/f columns after checking that
/// g never decreases.
int export_plots(const std::string& run_dir, std::ostream& out, std::ostream& err);

}  // namespace mtsp::cli
