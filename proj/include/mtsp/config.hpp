#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mtsp/evolution.hpp"

namespace mtsp {

// Experiment files are flat `key = value` lines; `#` starts a comment.
// Every key has a default, unknown or repeated keys are errors, and relative
// paths are taken from the directory of the file.

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::map<std::string, std::string> values;  ///< every key, defaults filled in
    std::filesystem::path base_dir;             ///< resolves relative file: paths
    GAConfig ga;
};

/// Recognised keys in file order.
const std::vector<std::string>& config_keys();

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
/// Throws std::ios_base::failure if the file cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Changes one key and rebuilds the derived settings.
void override_option(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Normalised text with absolute paths, enough to rerun the experiment.
std::string format_config(const ExperimentConfig& cfg);

/// `square:<n>`, `cube:<n>` or `file:<path>`.
Shape parse_shape_spec(const std::string& spec, const std::filesystem::path& base_dir);
/// `corner` or `file:<path>` naming a tile-set file with seed lines.
Seed parse_seed_spec(const std::string& spec, ModelKind m, const std::filesystem::path& base_dir);

}  // namespace mtsp
