// levylab: batch front-end for the experiment runners.
//
//   levylab <kind> [--config file.json] [--set field=value]... [--out dir]
//   levylab validate --config file.json
//
// Field overrides are applied to the config file's JSON before parsing, so
// a flag can set any schema field. Values are parsed as JSON when possible
// (numbers, arrays, booleans) and taken as strings otherwise.

#include "levylab/config.hpp"
#include "levylab/errors.hpp"
#include "levylab/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using levylab::ExperimentConfig;

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
};

nlohmann::json parse_value(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        return text;
    }
}

ExperimentConfig build_config(const Options& o, std::optional<std::string> kind) {
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw levylab::ParameterError("cannot open config file '" + o.config_path + "'");
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw levylab::ParameterError("config file '" + o.config_path + "' is not valid JSON: " + e.what());
        }
        if (j.is_object() && j.contains("config")) j = j.at("config");
    }
    if (!j.is_object()) throw levylab::ParameterError("config must be a JSON object");
    if (kind) {
        if (j.contains("kind") && j.at("kind") != *kind)
            throw levylab::ParameterError("subcommand '" + *kind + "' does not match config kind " + j.at("kind").dump());
        j["kind"] = *kind;
    }
    for (const auto& item : o.overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw levylab::ParameterError("override '" + item + "' is not of the form field=value");
        j[item.substr(0, eq)] = parse_value(item.substr(eq + 1));
    }
    if (o.seed) j["seed"] = *o.seed;
    if (o.workers) j["workers"] = *o.workers;
    if (!o.out.empty()) j["output_dir"] = o.out;
    return levylab::config_from_json(j);
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("-c,--config", o.config_path, "JSON config file (a manifest is accepted too)");
    cmd->add_option("-s,--set", o.overrides, "Override a config field: field=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Override the 64-bit seed");
    cmd->add_option("-j,--workers", o.workers, "Override the worker count");
}

void print_error(const nlohmann::json& record) { std::cerr << record.dump(2) << '\n'; }

nlohmann::json error_json(int code, const std::string& kind, const std::string& message) {
    return {{"status", "error"}, {"exit_code", code}, {"error", kind}, {"message", message},
            {"diagnostics", nlohmann::json::array()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation laboratory for stable-driven Ornstein-Uhlenbeck fields"};
    app.require_subcommand(1);

    Options options;
    const std::vector<std::string> kinds = {"simulate", "threshold-scan", "jump-density",
                                            "oscillation", "gaussian-check", "question4-probe"};
    std::map<std::string, CLI::App*> commands;
    for (const auto& kind : kinds) {
        CLI::App* cmd = app.add_subcommand(kind, "Run the " + kind + " experiment");
        add_common(cmd, options);
        cmd->add_option("-o,--out", options.out, "Output directory (default: $LEVYLAB_OUTPUT_DIR or levylab-out)");
        commands[kind] = cmd;
    }
    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a config and print field-level diagnostics");
    add_common(validate_cmd, options);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : levylab::exit_invalid_config;
    }

    try {
        if (validate_cmd->parsed()) {
            const ExperimentConfig config = build_config(options, std::nullopt);
            const auto diagnostics = levylab::validate(config);
            if (diagnostics.empty()) {
                std::cout << nlohmann::json{{"status", "ok"}}.dump() << '\n';
                return levylab::exit_ok;
            }
            nlohmann::json record = error_json(levylab::exit_invalid_config, "validation", "invalid configuration");
            for (const auto& d : diagnostics) record["diagnostics"].push_back({{"field", d.field}, {"message", d.message}});
            print_error(record);
            return levylab::exit_invalid_config;
        }
        for (const auto& [kind, cmd] : commands) {
            if (!cmd->parsed()) continue;
            const levylab::RunResult result = levylab::run(build_config(options, kind));
            if (result.exit_code != levylab::exit_ok) {
                print_error(result.error);
                return result.exit_code;
            }
            for (const auto& f : result.files) std::cout << f << '\n';
            return levylab::exit_ok;
        }
    } catch (const levylab::ParameterError& e) {
        print_error(error_json(levylab::exit_invalid_config, "validation", e.what()));
        return levylab::exit_invalid_config;
    } catch (const std::exception& e) {
        print_error(error_json(levylab::exit_failure, "runtime", e.what()));
        return levylab::exit_failure;
    }
    return levylab::exit_failure;
}
