#pragma once

// Experiment orchestration behind the command-line tool: configuration
// resolution, dispatch to the physics modules, tabular output and manifests.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synlat::sweep {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "SYNLAT_OUTPUT_DIR";

enum class Format { csv, json };
Format format_from_string(std::string_view name);

/// Decimal with 17 significant digits, '.' separator.
std::string format_number(double value);

struct Table {
    Table() = default;
    Table(std::string name_, std::vector<std::string> columns_) : name(std::move(name_)), columns(std::move(columns_)) {}

    std::string name;                 ///< file stem
    std::vector<std::string> columns; ///< names carry units, e.g. "s_R0"
    std::vector<std::vector<nlohmann::json>> rows;

    void add_row(std::vector<nlohmann::json> row);
    /// Header plus rows, '\n' line endings, numbers via format_number.
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

struct RunRecord {
    std::string label;
    std::uint64_t seed = 0;
    std::string status = "ok";
    std::int64_t resamples = 0;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunResult {
    std::string subcommand;
    nlohmann::json config; ///< resolved
    std::vector<Table> tables;
    std::vector<RunRecord> runs;
    std::vector<Check> checks;
    nlohmann::json summary = nlohmann::json::object();
    double wall_seconds = 0.0;

    bool checks_passed() const;
    /// One "PASS name: detail" / "FAIL name: detail" line per check.
    std::vector<std::string> report() const;
};

const std::vector<std::string>& subcommands();
const std::vector<std::string>& figure_ids();

struct OptionInfo {
    std::string name; ///< config key; the command-line flag is --name with '_' written as '-'
    std::string kind; ///< number, integer, seed, boolean, string, grid, lattice, window, optional_number
    nlohmann::json fallback;
    std::string help;
};

/// Configuration keys of a subcommand (reproduce excluded).
std::vector<OptionInfo> options(std::string_view subcommand);

/// JSON value of a configuration key from command-line text.
nlohmann::json value_from_text(std::string_view subcommand, const std::string& key, const std::string& text);

/// Full parameter block of a subcommand with every key at its default.
nlohmann::json default_config(std::string_view subcommand);

/// Defaults overlaid with `overrides`. Unknown keys, wrong types and invalid
/// values raise InvalidArgument.
nlohmann::json resolve_config(std::string_view subcommand, const nlohmann::json& overrides);

/// Grid from a JSON number, array, or string "log:lo:hi:n", "lin:lo:hi:n" or
/// "a,b,c". Tokens may be written sqrt(x).
std::vector<double> parse_grid(const nlohmann::json& spec);

/// Runs one subcommand on a resolved or partial config.
RunResult run(std::string_view subcommand, const nlohmann::json& config);

/// Pinned configuration of a figure or table reproduction.
nlohmann::json reproduce_config(std::string_view figure_id);

/// Runs the pinned configuration (keys in `overrides` replace pinned values)
/// and evaluates the acceptance checks attached to it.
RunResult reproduce(std::string_view figure_id, const nlohmann::json& overrides = nlohmann::json::object());

nlohmann::json manifest(const RunResult& result);

/// Writes every table as <name>.csv or <name>.json plus one manifest.json.
std::vector<std::filesystem::path> write_artifacts(const RunResult& result, const std::filesystem::path& dir,
                                                   Format format);

} // namespace synlat::sweep
