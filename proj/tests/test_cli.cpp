#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mtsp/cli.hpp"
#include "support.hpp"

using namespace mtsp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kTinyConfig =
    "shape = square:3\ngenerations = 3\npopulation = 12\ngenome_min = 5\ngenome_max = 10\n"
    "labels = 5\nlattice = 12\nmax_tiles = 20\nmax_sims = 2\n";

}  // namespace

TEST_CASE("verify exit codes")
{
    std::ostringstream out, err;
    cli::VerifyOptions v;
    v.tiles = test::source_path("data/square5-2d.tiles");
    v.bound = 40;
    CHECK(cli::verify(v, out, err) == cli::kSuccess);
    CHECK(out.str().find("C1=PASS") != std::string::npos);

    cli::VerifyOptions comb;
    comb.tiles = test::source_path("data/comb-2dr.tiles");
    comb.model = "2dr";
    comb.bound = 40;
    CHECK(cli::verify(comb, out, err) == cli::kConstraintFailure);

    cli::VerifyOptions tight = v;
    tight.budget = 10;
    CHECK(cli::verify(tight, out, err) == cli::kInconclusive);

    cli::VerifyOptions missing = v;
    missing.tiles = "/nonexistent/x.tiles";
    CHECK(cli::verify(missing, out, err) == cli::kIoError);

    cli::VerifyOptions wrong_model = v;
    wrong_model.model = "3dr";
    CHECK(cli::verify(wrong_model, out, err) == cli::kInvalidInput);

    cli::VerifyOptions small_bound = v;
    small_bound.bound = 10;
    CHECK(cli::verify(small_bound, out, err) == cli::kInvalidInput);
}

TEST_CASE("invalid inputs")
{
    TempDir dir("mtsp_cli_invalid");
    std::ofstream(dir.path / "bad.cfg") << "tau = 0\n";
    std::ofstream(dir.path / "empty.tiles") << "";
    std::ostringstream out, err;
    cli::SolveOptions s;
    s.config = (dir.path / "bad.cfg").string();
    s.out = (dir.path / "run").string();
    CHECK(cli::solve(s, out, err) == cli::kInvalidInput);
    CHECK_FALSE(err.str().empty());
    s.config = (dir.path / "missing.cfg").string();
    CHECK(cli::solve(s, out, err) == cli::kIoError);

    cli::ReplayOptions r;
    r.tiles = (dir.path / "empty.tiles").string();
    CHECK(cli::replay(r, out, err) == cli::kInvalidInput);
}

TEST_CASE("replay prints a deterministic trace")
{
    cli::ReplayOptions r;
    r.tiles = test::source_path("data/square5-2d.tiles");
    std::ostringstream a, b, err;
    CHECK(cli::replay(r, a, err) == cli::kSuccess);
    CHECK(cli::replay(r, b, err) == cli::kSuccess);
    CHECK(a.str() == b.str());
    const std::string trace = a.str();
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 24);
    CHECK(trace.rfind("u=2 ", 0) == 0);
}

TEST_CASE("solve writes its artifacts and export-plots reads them")
{
    TempDir dir("mtsp_cli_solve");
    std::ofstream(dir.path / "tiny.cfg") << kTinyConfig;
    std::ostringstream out, err;
    cli::SolveOptions s;
    s.config = (dir.path / "tiny.cfg").string();
    s.out = (dir.path / "run").string();
    s.quiet = true;
    const int code = cli::solve(s, out, err);
    CHECK((code == cli::kSuccess || code == cli::kConstraintFailure));
    for (const char* f : {"config.cfg", "series.csv", "best.tiles", "trace.txt", "summary.txt"})
        CHECK(fs::exists(dir.path / "run" / f));

    // the saved config reruns the experiment byte for byte
    cli::SolveOptions again = s;
    again.config = (dir.path / "run" / "config.cfg").string();
    again.out = (dir.path / "run2").string();
    again.workers = 3;
    CHECK(cli::solve(again, out, err) == code);
    CHECK(slurp(dir.path / "run" / "series.csv") == slurp(dir.path / "run2" / "series.csv"));
    CHECK(slurp(dir.path / "run" / "trace.txt") == slurp(dir.path / "run2" / "trace.txt"));

    // the best tile set replays under its own seed
    cli::ReplayOptions r;
    r.tiles = (dir.path / "run" / "best.tiles").string();
    r.config = (dir.path / "run" / "config.cfg").string();
    CHECK(cli::replay(r, out, err) == cli::kSuccess);

    CHECK(cli::export_plots((dir.path / "run").string(), out, err) == cli::kSuccess);
    CHECK(fs::exists(dir.path / "run" / "plots.txt"));

    std::ofstream(dir.path / "run" / "series.csv") << "generation,g,h,f,theta,omega_size,layers\n1,0.5,0,0,1,2,1\n2,0.4,0,0,1,2,1\n";
    CHECK(cli::export_plots((dir.path / "run").string(), out, err) == cli::kInvalidInput);
    CHECK(cli::export_plots((dir.path / "nowhere").string(), out, err) == cli::kIoError);
}
