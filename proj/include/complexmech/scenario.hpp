#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "complexmech/core.hpp"

// Declarative scenario runner. A TOML config names one scenario, optional
// unit overrides and a flat parameter table; running it writes CSV series,
// state JSON and a summary.json carrying every invariant verdict.
namespace complexmech::scenario {

struct ScenarioInfo {
    std::string_view name;
    std::string_view description;
};

const std::vector<ScenarioInfo>& scenarios();

/// Every problem found in a config, not just the first.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Module failure during a run, prefixed with the scenario name.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    std::string scenario;
    std::string output = "out";
    std::int64_t seed = 0;  // reserved; every scenario is deterministic
    Units units;
    /// Effective parameters, defaults filled in. Integers are stored exactly
    /// as doubles.
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> texts;
    /// Raw config text; its SHA-256 is the config hash.
    std::string source;

    double num(const std::string& key) const { return numbers.at(key); }
    std::size_t count(const std::string& key) const { return static_cast<std::size_t>(numbers.at(key)); }
    const std::string& text(const std::string& key) const { return texts.at(key); }
};

/// Parses and validates; throws ValidationError listing all problems.
ScenarioConfig validate_config(std::string_view text);

/// Levenshtein distance, used for "did you mean" hints.
std::size_t edit_distance(std::string_view a, std::string_view b);

struct Artifact {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes;
};

struct ScenarioResult {
    nlohmann::ordered_json summary;
    std::vector<Artifact> artifacts;
    bool all_invariants_pass = true;
};

/// Runs a validated config, writing artifacts and summary.json into out_dir
/// (created if missing). Identical configs give byte-identical files.
ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace complexmech::scenario
