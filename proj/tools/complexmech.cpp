// Scenario runner CLI.
//
//   complexmech run <config.toml> [--out DIR]
//   complexmech validate <config.toml>
//   complexmech list-scenarios
//
// Exit codes: 0 ok, 1 invalid config, 2 runtime error, 3 an invariant failed.
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "complexmech/io.hpp"
#include "complexmech/scenario.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kRuntime = 2, kInvariant = 3 };

complexmech::scenario::ScenarioConfig load(const std::string& path) {
    return complexmech::scenario::validate_config(complexmech::io::read_file(path));
}

void print_errors(const complexmech::scenario::ValidationError& e) {
    std::cerr << "invalid config:\n";
    for (const auto& msg : e.errors()) std::cerr << "  " << msg << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    namespace cs = complexmech::scenario;
    CLI::App app{"Complexified mechanics scenario runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "TOML config")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (overrides COMPLEXMECH_OUT and the config)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", validate_path, "TOML config")->required()->check(CLI::ExistingFile);

    app.add_subcommand("list-scenarios", "list available scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (app.got_subcommand("list-scenarios")) {
            for (const auto& s : cs::scenarios()) std::cout << s.name << "\t" << s.description << '\n';
            return kOk;
        }
        if (app.got_subcommand("validate")) {
            const auto cfg = load(validate_path);
            std::cout << "ok: " << cfg.scenario << '\n';
            return kOk;
        }

        const auto cfg = load(config_path);
        std::filesystem::path dir = cfg.output;
        if (!out_dir.empty()) {
            dir = out_dir;
        } else if (const char* env = std::getenv("COMPLEXMECH_OUT"); env && *env) {
            dir = env;
        }
        const auto result = cs::run_scenario(cfg, dir);
        for (const auto& [name, verdict] : result.summary["invariants"].items()) {
            std::cout << (verdict["pass"].get<bool>() ? "pass " : "FAIL ") << name << '\n';
        }
        std::cout << "wrote " << result.artifacts.size() + 1 << " files to " << dir.string() << '\n';
        return result.all_invariants_pass ? kOk : kInvariant;
    } catch (const cs::ValidationError& e) {
        print_errors(e);
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
}
