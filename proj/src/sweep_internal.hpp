#pragma once

// Shared between sweep.cpp, runs.cpp and reproduce.cpp; not installed.

#include "synlat/sweep.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synlat::sweep::detail {

using json = nlohmann::json;

enum class Kind { number, integer, seed, boolean, string, grid, lattice, window, optional_number };

struct Key {
    std::string name;
    Kind kind;
    json fallback;
    std::string help;
};

const std::vector<Key>& schema(std::string_view subcommand);

/// Checks and normalizes one value against its kind (integral floats become integers).
json coerce(const Key& key, const json& value);

double get_number(const json& cfg, const std::string& key);
int get_int(const json& cfg, const std::string& key);
std::int64_t get_int64(const json& cfg, const std::string& key);
std::uint64_t get_seed(const json& cfg);
bool get_bool(const json& cfg, const std::string& key);
std::string get_string(const json& cfg, const std::string& key);
std::vector<double> get_grid(const json& cfg, const std::string& key);
std::optional<double> get_optional(const json& cfg, const std::string& key);
std::optional<std::pair<int, int>> get_window(const json& cfg);
unsigned get_workers(const json& cfg);

RunResult run_bands(const json& cfg);
RunResult run_disorder(const json& cfg);
RunResult run_localization(const json& cfg);
RunResult run_scaling(const json& cfg);
RunResult run_dynamics(const json& cfg);
RunResult run_prepare(const json& cfg);
RunResult run_compare(const json& cfg);

/// Appends tables, run records and checks of `part`, prefixing table names.
void merge_into(RunResult& target, RunResult part, const std::string& prefix);

} // namespace synlat::sweep::detail
