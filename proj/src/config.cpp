#include "mtsp/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mtsp/tileset_io.hpp"

namespace mtsp {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults()
{
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"model", "2d"},
        {"tau", "2"},
        {"shape", "square:5"},
        {"seed_tiles", "corner"},
        {"generations", "1000"},
        {"population", "1000"},
        {"elitist_fraction", "0.1"},
        {"diversity_fraction", "0.05"},
        {"crossover_p_initial", "0.3"},
        {"crossover_p_final", "0.7"},
        {"layer_weight_initial", "1"},
        {"layer_weight_final", "30"},
        {"max_crossover_attempts", "1000"},
        {"min_crossover_distance", "0"},
        {"genome_min", "25"},
        {"genome_max", "50"},
        {"labels", "10"},
        {"lattice", "30"},
        {"max_tiles", "100"},
        {"max_sims", "10"},
        {"rng_seed", "1"},
        {"epsilon_weight", "1"},
        {"alpha_mode", "same_position"},
        {"stop_on_success", "false"},
    };
    return d;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& v)
{
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": bad number '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": bad number '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void rebuild(ExperimentConfig& c)
{
    const auto& v = c.values;
    auto get = [&](const char* k) -> const std::string& { return v.at(k); };
    GAConfig g;
    const auto model = parse_model(get("model"));
    if (!model) throw ConfigError("model: expected 2d, 2dr or 3dr, got '" + get("model") + "'");
    g.sim.model = *model;
    g.sim.tau = parse_number<int>("tau", get("tau"));
    g.sim.extent = parse_number<int>("lattice", get("lattice"));
    g.sim.max_tiles = parse_number<int>("max_tiles", get("max_tiles"));
    g.sim.max_sims = parse_number<int>("max_sims", get("max_sims"));
    g.generations = parse_number<int>("generations", get("generations"));
    g.population = parse_number<int>("population", get("population"));
    g.elitist_fraction = parse_real("elitist_fraction", get("elitist_fraction"));
    g.diversity_fraction = parse_real("diversity_fraction", get("diversity_fraction"));
    g.crossover_p_initial = parse_real("crossover_p_initial", get("crossover_p_initial"));
    g.crossover_p_final = parse_real("crossover_p_final", get("crossover_p_final"));
    g.layer_weight_initial = parse_real("layer_weight_initial", get("layer_weight_initial"));
    g.layer_weight_final = parse_real("layer_weight_final", get("layer_weight_final"));
    g.max_crossover_attempts = parse_number<int>("max_crossover_attempts", get("max_crossover_attempts"));
    g.min_crossover_distance = parse_real("min_crossover_distance", get("min_crossover_distance"));
    g.genome_min = parse_number<int>("genome_min", get("genome_min"));
    g.genome_max = parse_number<int>("genome_max", get("genome_max"));
    g.labels = parse_number<int>("labels", get("labels"));
    g.rng_seed = parse_number<std::uint64_t>("rng_seed", get("rng_seed"));
    g.epsilon_weight = parse_real("epsilon_weight", get("epsilon_weight"));
    g.stop_on_success = parse_bool("stop_on_success", get("stop_on_success"));
    const std::string& mode = get("alpha_mode");
    if (mode == "same_position") g.alpha_mode = AlphaMode::SamePosition;
    else if (mode == "frontier") g.alpha_mode = AlphaMode::Frontier;
    else throw ConfigError("alpha_mode: expected same_position or frontier, got '" + mode + "'");
    try {
        g.target = parse_shape_spec(get("shape"), c.base_dir);
        g.seed = parse_seed_spec(get("seed_tiles"), g.sim.model, c.base_dir);
        validate(g);
    } catch (const std::ios_base::failure&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    c.ga = std::move(g);
}

}  // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, value] : defaults()) k.push_back(key);
        return k;
    }();
    return keys;
}

Shape parse_shape_spec(const std::string& spec, const std::filesystem::path& base_dir)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("shape: expected square:<n>, cube:<n> or file:<path>");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (kind == "square") return square_shape(parse_number<int>("shape", arg));
    if (kind == "cube") return cube_shape(parse_number<int>("shape", arg));
    if (kind == "file") return read_shape_file(resolve(base_dir, arg).string());
    throw ConfigError("shape: unknown kind '" + kind + "'");
}

Seed parse_seed_spec(const std::string& spec, ModelKind m, const std::filesystem::path& base_dir)
{
    if (spec == "corner") return corner_seed(m);
    if (spec.rfind("file:", 0) == 0) {
        const TileSetFile f = read_tileset_file(resolve(base_dir, spec.substr(5)).string());
        if (!f.seed) throw ConfigError("seed_tiles: file has no seed lines");
        check_tileset_model(f, m);
        return *f.seed;
    }
    throw ConfigError("seed_tiles: expected corner or file:<path>");
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    ExperimentConfig c;
    c.base_dir = base_dir;
    for (const auto& [k, v] : defaults()) c.values[k] = v;
    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!c.values.count(key)) throw ConfigError(where + "unknown key '" + key + "'");
        if (seen.count(key)) throw ConfigError(where + "key '" + key + "' repeats line " + std::to_string(seen[key]));
        if (value.empty()) throw ConfigError(where + "key '" + key + "' has no value");
        seen[key] = line_no;
        c.values[key] = value;
    }
    rebuild(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::filesystem::absolute(path).parent_path());
}

void override_option(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    if (!cfg.values.count(key)) throw ConfigError("unknown key '" + key + "'");
    cfg.values[key] = value;
    rebuild(cfg);
}

std::string format_config(const ExperimentConfig& cfg)
{
    std::string out;
    for (const auto& key : config_keys()) {
        std::string value = cfg.values.at(key);
        if ((key == "shape" || key == "seed_tiles") && value.rfind("file:", 0) == 0)
            value = "file:" + std::filesystem::absolute(resolve(cfg.base_dir, value.substr(5))).lexically_normal().string();
        out += key + " = " + value + "\n";
    }
    return out;
}

}  // namespace mtsp
