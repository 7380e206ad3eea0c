// synlat: command-line front end for the synthetic-lattice simulations.
//
// Exit codes: 0 success, 1 a reproduce check failed, 2 invalid configuration,
// 3 numerical failure.

#include "synlat/errors.hpp"
#include "synlat/sweep.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace {

using json = nlohmann::json;
namespace sw = synlat::sweep;

constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

std::string flag_name(const std::string& key) {
    std::string f = key;
    for (char& c : f)
        if (c == '_') c = '-';
    return "--" + f;
}

json read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw synlat::InvalidArgument(fmt::format("cannot open config file {}", path));
    try {
        json j = json::parse(f);
        if (!j.is_object()) throw synlat::InvalidArgument(fmt::format("config file {} must hold a JSON object", path));
        return j;
    } catch (const json::parse_error& e) {
        throw synlat::InvalidArgument(fmt::format("config file {}: {}", path, e.what()));
    }
}

std::filesystem::path output_dir(const json& cfg) {
    const std::string configured = cfg.value("output_dir", std::string{});
    if (!configured.empty()) return configured;
    if (const char* env = std::getenv(sw::kOutputDirEnv); env && *env) return env;
    return ".";
}

struct SubcommandOptions {
    CLI::App* app = nullptr;
    std::string config_file;
    std::map<std::string, std::optional<std::string>> values; // config key -> flag text
};

int finish(sw::RunResult& result, const json& cfg, bool quiet) {
    const auto dir = output_dir(cfg);
    const auto fmt_kind = sw::format_from_string(cfg.value("format", std::string{"csv"}));
    const auto paths = sw::write_artifacts(result, dir, fmt_kind);
    if (!quiet) {
        fmt::print("synlat {}: {} file(s) in {} ({:.2f} s)\n", result.subcommand, paths.size(), dir.string(),
                   result.wall_seconds);
        for (const auto& line : result.report()) fmt::print("{}\n", line);
    }
    return result.checks_passed() ? 0 : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flat bands, disorder and quench dynamics of Rydberg synthetic lattices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sw::kToolVersion));
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress the summary on stdout");

    std::map<std::string, SubcommandOptions> subs;
    for (const auto& name : sw::subcommands()) {
        if (name == "reproduce") continue;
        auto& so = subs[name];
        so.app = app.add_subcommand(name, fmt::format("run the {} experiment", name));
        so.app->add_option("--config", so.config_file, "JSON config file; flags override its keys");
        for (const auto& opt : sw::options(name)) {
            auto& slot = so.values[opt.name];
            so.app->add_option(flag_name(opt.name), slot,
                               fmt::format("{} [{}; default {}]", opt.help, opt.kind, opt.fallback.dump()));
        }
    }

    auto* rep = app.add_subcommand("reproduce", "run a pinned figure/table configuration with pass/fail checks");
    std::string figure;
    std::string rep_config;
    std::map<std::string, std::optional<std::string>> rep_values;
    rep->add_option("figure", figure, "fig1, fig2, fig3, fig4, fig5 or tableS1")
        ->required()
        ->check(CLI::IsMember(sw::figure_ids()));
    rep->add_option("--config", rep_config, "JSON file with master_seed, workers, output_dir or format");
    for (const char* key : {"master_seed", "workers", "output_dir", "format"})
        rep->add_option(flag_name(key), rep_values[key], "see the run subcommands");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (rep->parsed()) {
            json overrides = rep_config.empty() ? json::object() : read_config_file(rep_config);
            for (const auto& [key, text] : rep_values)
                if (text) overrides[key] = sw::value_from_text("bands", key, *text);
            auto result = sw::reproduce(figure, overrides);
            // execution keys only; the figure's data config lives in the result
            return finish(result, sw::resolve_config("bands", overrides), quiet);
        }
        for (auto& [name, so] : subs) {
            if (!so.app->parsed()) continue;
            json overrides = so.config_file.empty() ? json::object() : read_config_file(so.config_file);
            for (const auto& [key, text] : so.values)
                if (text) overrides[key] = sw::value_from_text(name, key, *text);
            json cfg = sw::resolve_config(name, overrides);
            cfg["output_dir"] = output_dir(cfg).string();
            auto result = sw::run(name, cfg);
            return finish(result, cfg, quiet);
        }
    } catch (const synlat::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const synlat::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
