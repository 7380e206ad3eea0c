#include "synlat/sweep.hpp"

#include "sweep_internal.hpp"
#include "synlat/errors.hpp"
#include "synlat/lattice.hpp"
#include "synlat/parallel.hpp"
#include "synlat/transfer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

namespace synlat::sweep {

using json = nlohmann::json;
using detail::Key;
using detail::Kind;

Format format_from_string(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw InvalidArgument(fmt::format("unknown output format '{}' (csv or json)", name));
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", value);
}

namespace {

std::string csv_cell(const json& v) {
    switch (v.type()) {
    case json::value_t::null: return "";
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
    case json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
    case json::value_t::number_float: return format_number(v.get<double>());
    case json::value_t::string: {
        const auto& s = v.get_ref<const std::string&>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }
    default: return csv_cell(json(v.dump()));
    }
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_token(const std::string& raw) {
    const std::string tok = trim(raw);
    if (tok.rfind("sqrt(", 0) == 0 && tok.size() > 6 && tok.back() == ')') {
        const double x = parse_token(tok.substr(5, tok.size() - 6));
        if (x < 0) throw InvalidArgument(fmt::format("sqrt of negative value in '{}'", tok));
        return std::sqrt(x);
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw InvalidArgument(fmt::format("cannot parse number '{}'", tok));
    }
    if (used != tok.size() || !std::isfinite(v)) throw InvalidArgument(fmt::format("cannot parse number '{}'", tok));
    return v;
}

// Keys that do not affect computed values; stripped from configs embedded in data files.
bool is_execution_key(const std::string& k) { return k == "workers" || k == "output_dir" || k == "format"; }

json data_config(const json& cfg) {
    if (cfg.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : cfg.items())
            if (!is_execution_key(k)) out[k] = data_config(v);
        return out;
    }
    if (cfg.is_array()) {
        json out = json::array();
        for (const auto& v : cfg) out.push_back(data_config(v));
        return out;
    }
    return cfg;
}

} // namespace

void Table::add_row(std::vector<json> row) {
    if (row.size() != columns.size())
        throw InvalidArgument(fmt::format("table {}: row has {} cells, expected {}", name, row.size(), columns.size()));
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

json Table::to_json() const {
    json rows_j = json::array();
    for (const auto& row : rows) {
        json r = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) r[columns[c]] = row[c];
        rows_j.push_back(std::move(r));
    }
    return {{"name", name}, {"columns", columns}, {"rows", std::move(rows_j)}};
}

bool RunResult::checks_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> RunResult::report() const {
    std::vector<std::string> out;
    for (const auto& c : checks) out.push_back(fmt::format("{} {}: {}", c.passed ? "PASS" : "FAIL", c.name, c.detail));
    return out;
}

// ---- schema ----------------------------------------------------------------

namespace detail {

namespace {

std::vector<Key> with_common(std::vector<Key> keys) {
    keys.push_back({"master_seed", Kind::seed, 1, "master seed of the counter-based seed derivation"});
    keys.push_back({"workers", Kind::integer, 0, "worker threads (0 = all hardware threads)"});
    keys.push_back({"output_dir", Kind::string, "", "output directory (default: $SYNLAT_OUTPUT_DIR or .)"});
    keys.push_back({"format", Kind::string, "csv", "table format: csv or json"});
    return keys;
}

std::vector<Key> localization_keys(bool single_energy) {
    std::vector<Key> k;
    if (single_energy) {
        k.push_back({"energy", Kind::grid, 1.8, "energy or energies in units of Omega"});
        k.push_back({"mode", Kind::string, "positional", "positional, flat_pair_only or flat_all_sites"});
    } else {
        k.push_back({"energies", Kind::grid, "1,sqrt(2),1.8,2,sqrt(6)", "energies in units of Omega"});
        k.push_back({"modes", Kind::string, "positional,flat_pair_only,flat_all_sites", "comma-separated disorder modes"});
    }
    k.push_back({"s_grid", Kind::grid, "log:5e-6:5e-4:12", "positional disorder strengths s = sigma/R0"});
    k.push_back({"w_grid_pair_only", Kind::grid, "log:5e-2:1:12", "box widths W (Omega), flat_pair_only"});
    k.push_back({"w_grid_all_sites", Kind::grid, "log:1e-1:1:12", "box widths W (Omega), flat_all_sites"});
    k.push_back({"steps", Kind::integer, 1000000, "transfer-matrix steps per run"});
    k.push_back({"qr_period", Kind::integer, 8, "steps between QR reorthogonalizations"});
    k.push_back({"alpha", Kind::integer, 3, "interaction exponent (3 or 6)"});
    k.push_back({"v0_over_omega", Kind::number, 300.0, "V(R0)/Omega"});
    k.push_back({"linearized", Kind::boolean, false, "first-order pair shifts instead of exact V(d) - V(R0)"});
    k.push_back({"fit_window", Kind::window, nullptr, "manual fit window [first, last) over grid indices"});
    k.push_back({"relative_cut", Kind::number, 0.25, "curvature cut, relative to the leading slope"});
    k.push_back({"absolute_floor", Kind::number, 0.25, "curvature cut, absolute floor"});
    k.push_back({"min_points", Kind::integer, 4, "minimum points kept in a fit"});
    return with_common(std::move(k));
}

const std::map<std::string, std::vector<Key>, std::less<>>& schemas() {
    static const std::map<std::string, std::vector<Key>, std::less<>> s = {
        {"bands",
         with_common({
             {"lattice", Kind::lattice, "honeycomb", "chain, ladder, square, triangular, honeycomb or a lattice object"},
             {"kpoints", Kind::integer, 1024, "number of quasimomenta"},
             {"grid", Kind::string, "auto", "zone, random or auto (zone when the count fits a uniform grid)"},
             {"flat_tol", Kind::number, 1e-8, "flatness tolerance (Omega)"},
         })},
        {"disorder",
         with_common({
             {"s", Kind::number, 0.05, "s = sigma/R0 for the energy-shift distribution"},
             {"alpha", Kind::integer, 3, "interaction exponent (3 or 6)"},
             {"samples", Kind::integer, 1000000, "energy-shift samples"},
             {"bins", Kind::integer, 60, "histogram bins"},
             {"chain_s", Kind::number, 0.01, "s for the chain covariance and mean-distance statistics"},
             {"covariance_atoms", Kind::integer, 6, "atoms in the covariance chain"},
             {"covariance_samples", Kind::integer, 100000, "chain realizations for the covariance"},
             {"mean_length", Kind::integer, 8, "distances averaged for Var D"},
             {"mean_samples", Kind::integer, 100000, "chain realizations for Var D"},
             {"tail_s", Kind::number, 0.3, "s for the tail probability"},
             {"temperature_K", Kind::optional_number, nullptr, "trap temperature (K), enables the trap-width table"},
             {"trap_frequency_rad_s", Kind::optional_number, nullptr, "trap angular frequency (rad/s)"},
             {"mass_kg", Kind::optional_number, nullptr, "atomic mass (kg)"},
         })},
        {"localization", localization_keys(true)},
        {"scaling", localization_keys(false)},
        {"dynamics",
         with_common({
             {"L", Kind::integer, 20, "ladder length (rungs)"},
             {"rung", Kind::optional_number, nullptr, "left rung of psi_loc (default L/2)"},
             {"s_grid", Kind::grid, "log:1e-5:1e-1:17", "disorder strengths s"},
             {"v0_over_omega", Kind::grid, "200", "V(R0)/Omega values"},
             {"omega_t", Kind::grid, "0,10,20,50,100,200,500", "times Omega t"},
             {"realizations", Kind::integer, 100, "disorder realizations per cell"},
             {"alpha", Kind::integer, 3, "interaction exponent (3 or 6)"},
             {"profile_s", Kind::optional_number, nullptr, "s of the averaged profile table (default first s)"},
             {"profile_v0", Kind::optional_number, nullptr, "V(R0)/Omega of the profile table (default first)"},
             {"combined_legs", Kind::boolean, false, "also report the width of the pooled two-leg profile"},
         })},
        {"prepare",
         with_common({
             {"mode", Kind::string, "ideal_gate", "ideal_gate or full_hamiltonian"},
             {"omega_r", Kind::number, 1.0, "addressing Rabi frequency (Omega), full_hamiltonian mode"},
             {"v0_over_omega", Kind::number, 200.0, "V(R0)/Omega of the plaquette"},
             {"alpha", Kind::integer, 3, "interaction exponent (3 or 6)"},
             {"L", Kind::integer, 4, "ladder length for the embedding check"},
             {"rung", Kind::optional_number, nullptr, "left rung of the plaquette (default L/2)"},
         })},
        {"compare",
         with_common({
             {"L", Kind::integer, 4, "ladder length (rungs, at most 7)"},
             {"rung", Kind::optional_number, nullptr, "left rung of psi_loc (default L/2)"},
             {"s_grid", Kind::grid, "log:1e-3:1e-1:6", "disorder strengths s"},
             {"v0_over_omega", Kind::grid, "20,200", "V(R0)/Omega values"},
             {"omega_t_over_2pi", Kind::number, 4.3, "evolution time Omega t / 2 pi"},
             {"realizations", Kind::integer, 100, "disorder realizations per cell"},
             {"alpha", Kind::integer, 3, "interaction exponent (3 or 6)"},
             {"distances", Kind::string, "geometric", "geometric or chain_indexed"},
         })},
    };
    return s;
}

} // namespace

const std::vector<Key>& schema(std::string_view subcommand) {
    const auto& s = schemas();
    const auto it = s.find(subcommand);
    if (it == s.end()) throw InvalidArgument(fmt::format("unknown subcommand '{}'", subcommand));
    return it->second;
}

json coerce(const Key& key, const json& v) {
    auto bad = [&](std::string_view what) {
        return InvalidArgument(fmt::format("config key '{}': expected {}, got {}", key.name, what, v.dump()));
    };
    switch (key.kind) {
    case Kind::number:
        if (!v.is_number()) throw bad("a number");
        return v;
    case Kind::integer:
    case Kind::seed: {
        if (v.is_number_unsigned()) return v;
        if (v.is_number_integer()) {
            if (key.kind == Kind::seed && v.get<std::int64_t>() < 0) throw bad("a non-negative integer");
            return v;
        }
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::floor(d) != d || std::abs(d) > 9.0e15) throw bad("an integer");
            if (key.kind == Kind::seed && d < 0) throw bad("a non-negative integer");
            return json(static_cast<std::int64_t>(d));
        }
        throw bad("an integer");
    }
    case Kind::boolean:
        if (!v.is_boolean()) throw bad("true or false");
        return v;
    case Kind::string:
        if (!v.is_string()) throw bad("a string");
        return v;
    case Kind::grid:
        if (!(v.is_string() || v.is_number() || v.is_array())) throw bad("a grid (string, number or array)");
        parse_grid(v);
        return v;
    case Kind::lattice:
        if (!(v.is_string() || v.is_object())) throw bad("a lattice name or object");
        if (v.is_string() && lattice_kind_from_string(v.get<std::string>()) == LatticeKind::custom)
            throw bad("a built-in lattice name (custom lattices are given as objects)");
        return v;
    case Kind::window:
        if (v.is_null()) return v;
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
            throw bad("null or [first, last]");
        return v;
    case Kind::optional_number:
        if (!(v.is_null() || v.is_number())) throw bad("null or a number");
        return v;
    }
    return v;
}

double get_number(const json& cfg, const std::string& key) { return cfg.at(key).get<double>(); }

int get_int(const json& cfg, const std::string& key) {
    const auto v = cfg.at(key).get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw InvalidArgument(fmt::format("config key '{}' out of range", key));
    return static_cast<int>(v);
}

std::int64_t get_int64(const json& cfg, const std::string& key) { return cfg.at(key).get<std::int64_t>(); }

std::uint64_t get_seed(const json& cfg) {
    const auto& v = cfg.at("master_seed");
    return v.is_number_unsigned() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(v.get<std::int64_t>());
}

bool get_bool(const json& cfg, const std::string& key) { return cfg.at(key).get<bool>(); }

std::string get_string(const json& cfg, const std::string& key) { return cfg.at(key).get<std::string>(); }

std::vector<double> get_grid(const json& cfg, const std::string& key) { return parse_grid(cfg.at(key)); }

std::optional<double> get_optional(const json& cfg, const std::string& key) {
    const auto& v = cfg.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

std::optional<std::pair<int, int>> get_window(const json& cfg) {
    const auto& v = cfg.at("fit_window");
    if (v.is_null()) return std::nullopt;
    return std::pair{v[0].get<int>(), v[1].get<int>()};
}

unsigned get_workers(const json& cfg) {
    const int w = get_int(cfg, "workers");
    if (w < 0) throw InvalidArgument("workers must be >= 0");
    return resolve_workers(static_cast<unsigned>(w));
}

void merge_into(RunResult& target, RunResult part, const std::string& prefix) {
    for (auto& t : part.tables) {
        if (!prefix.empty()) t.name = prefix + "_" + t.name;
        target.tables.push_back(std::move(t));
    }
    for (auto& r : part.runs) {
        if (!prefix.empty()) r.label = prefix + "/" + r.label;
        target.runs.push_back(std::move(r));
    }
    for (auto& c : part.checks) target.checks.push_back(std::move(c));
    if (!prefix.empty()) target.summary[prefix] = std::move(part.summary);
}

} // namespace detail

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s = {"bands",    "disorder", "localization", "scaling",
                                               "dynamics", "prepare",  "compare",      "reproduce"};
    return s;
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> f = {"fig1", "fig2", "fig3", "fig4", "fig5", "tableS1"};
    return f;
}

namespace {

const char* kind_name(Kind k) {
    switch (k) {
    case Kind::number: return "number";
    case Kind::integer: return "integer";
    case Kind::seed: return "seed";
    case Kind::boolean: return "boolean";
    case Kind::string: return "string";
    case Kind::grid: return "grid";
    case Kind::lattice: return "lattice";
    case Kind::window: return "window";
    case Kind::optional_number: return "optional_number";
    }
    return "string";
}

json parse_json_text(const std::string& text, const std::string& key) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(fmt::format("option {}: invalid JSON: {}", key, e.what()));
    }
}

} // namespace

std::vector<OptionInfo> options(std::string_view subcommand) {
    std::vector<OptionInfo> out;
    for (const auto& k : detail::schema(subcommand)) out.push_back({k.name, kind_name(k.kind), k.fallback, k.help});
    return out;
}

json value_from_text(std::string_view subcommand, const std::string& key, const std::string& raw) {
    const auto& keys = detail::schema(subcommand);
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return k.name == key; });
    if (it == keys.end()) throw InvalidArgument(fmt::format("unknown option '{}' for {}", key, subcommand));
    const std::string text = trim(raw);
    json v;
    switch (it->kind) {
    case Kind::number: v = parse_token(text); break;
    case Kind::optional_number: v = text == "null" ? json(nullptr) : json(parse_token(text)); break;
    case Kind::integer:
    case Kind::seed:
        if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            try {
                v = std::stoull(text);
            } catch (const std::exception&) {
                throw InvalidArgument(fmt::format("option {}: '{}' out of range", key, text));
            }
        } else {
            v = parse_token(text);
        }
        break;
    case Kind::boolean:
        if (text == "true" || text == "1" || text == "yes" || text == "on") v = true;
        else if (text == "false" || text == "0" || text == "no" || text == "off") v = false;
        else throw InvalidArgument(fmt::format("option {}: expected true or false, got '{}'", key, text));
        break;
    case Kind::string: v = text; break;
    case Kind::grid: v = !text.empty() && text.front() == '[' ? parse_json_text(text, key) : json(text); break;
    case Kind::lattice:
        if (!text.empty() && text.front() == '{') {
            v = parse_json_text(text, key);
        } else if (text.size() > 5 && text.ends_with(".json")) {
            std::ifstream f(text);
            if (!f) throw InvalidArgument(fmt::format("cannot open lattice file {}", text));
            try {
                v = json::parse(f);
            } catch (const json::parse_error& e) {
                throw InvalidArgument(fmt::format("lattice file {}: {}", text, e.what()));
            }
        } else {
            v = text;
        }
        break;
    case Kind::window: {
        if (text == "null") {
            v = nullptr;
            break;
        }
        if (!text.empty() && text.front() == '[') {
            v = parse_json_text(text, key);
            break;
        }
        const auto sep = text.find_first_of(",:");
        if (sep == std::string::npos) throw InvalidArgument(fmt::format("option {}: expected first,last", key));
        const double a = parse_token(text.substr(0, sep)), b = parse_token(text.substr(sep + 1));
        if (std::floor(a) != a || std::floor(b) != b) throw InvalidArgument(fmt::format("option {}: integers expected", key));
        v = json::array({static_cast<int>(a), static_cast<int>(b)});
        break;
    }
    }
    return detail::coerce(*it, v);
}

json default_config(std::string_view subcommand) {
    json cfg = json::object();
    for (const auto& k : detail::schema(subcommand)) cfg[k.name] = k.fallback;
    return cfg;
}

json resolve_config(std::string_view subcommand, const json& overrides) {
    const auto& keys = detail::schema(subcommand);
    json cfg = default_config(subcommand);
    if (overrides.is_null()) return cfg;
    if (!overrides.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [name, value] : overrides.items()) {
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return k.name == name; });
        if (it == keys.end()) throw InvalidArgument(fmt::format("unknown config key '{}' for {}", name, subcommand));
        cfg[name] = detail::coerce(*it, value);
    }
    format_from_string(cfg.at("format").get<std::string>());
    if (cfg.at("workers").get<std::int64_t>() < 0) throw InvalidArgument("workers must be >= 0");
    return cfg;
}

std::vector<double> parse_grid(const json& spec) {
    std::vector<double> out;
    if (spec.is_number()) {
        out.push_back(spec.get<double>());
    } else if (spec.is_array()) {
        for (const auto& v : spec) {
            if (v.is_number())
                out.push_back(v.get<double>());
            else if (v.is_string())
                out.push_back(parse_token(v.get<std::string>()));
            else
                throw InvalidArgument(fmt::format("grid element {} is not a number", v.dump()));
        }
    } else if (spec.is_string()) {
        const std::string s = trim(spec.get<std::string>());
        if (s.rfind("log:", 0) == 0 || s.rfind("lin:", 0) == 0) {
            const auto parts = split(s, ':');
            if (parts.size() != 4) throw InvalidArgument(fmt::format("grid '{}': expected kind:lo:hi:n", s));
            const double lo = parse_token(parts[1]), hi = parse_token(parts[2]);
            const double nd = parse_token(parts[3]);
            if (nd < 1 || std::floor(nd) != nd) throw InvalidArgument(fmt::format("grid '{}': n must be >= 1", s));
            const int n = static_cast<int>(nd);
            if (parts[0] == "log") {
                if (!(lo > 0 && hi > 0)) throw InvalidArgument(fmt::format("grid '{}': log bounds must be > 0", s));
                out = n == 1 ? std::vector<double>{lo} : log_grid(lo, hi, n);
            } else {
                for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
            }
        } else {
            for (const auto& tok : split(s, ',')) out.push_back(parse_token(tok));
        }
    } else {
        throw InvalidArgument(fmt::format("cannot read grid from {}", spec.dump()));
    }
    if (out.empty()) throw InvalidArgument("empty grid");
    for (double v : out)
        if (!std::isfinite(v)) throw InvalidArgument("grid values must be finite");
    return out;
}

RunResult run(std::string_view subcommand, const json& config) {
    const json cfg = resolve_config(subcommand, config);
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    if (subcommand == "bands") r = detail::run_bands(cfg);
    else if (subcommand == "disorder") r = detail::run_disorder(cfg);
    else if (subcommand == "localization") r = detail::run_localization(cfg);
    else if (subcommand == "scaling") r = detail::run_scaling(cfg);
    else if (subcommand == "dynamics") r = detail::run_dynamics(cfg);
    else if (subcommand == "prepare") r = detail::run_prepare(cfg);
    else if (subcommand == "compare") r = detail::run_compare(cfg);
    else throw InvalidArgument(fmt::format("unknown subcommand '{}'", subcommand));
    r.subcommand = std::string(subcommand);
    r.config = cfg;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

json manifest(const RunResult& result) {
    json runs = json::array();
    for (const auto& r : result.runs)
        runs.push_back({{"label", r.label}, {"seed", r.seed}, {"status", r.status}, {"resamples", r.resamples}});
    json checks = json::array();
    for (const auto& c : result.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    json tables = json::array();
    for (const auto& t : result.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows.size()}});
    const bool failed_run =
        std::any_of(result.runs.begin(), result.runs.end(), [](const RunRecord& r) { return r.status != "ok"; });
    return {
        {"tool", "synlat"},
        {"tool_version", std::string(kToolVersion)},
        {"subcommand", result.subcommand},
        {"config", result.config},
        {"seed_derivation",
         {{"scheme", "seed = mix64(mix64(mix64(master_seed) ^ fnv1a64(tag)) ^ index), mix64 = SplitMix64 finalizer"},
          {"master_seed", result.config.contains("master_seed") ? result.config["master_seed"] : json(nullptr)}}},
        {"runs", std::move(runs)},
        {"checks", std::move(checks)},
        {"tables", std::move(tables)},
        {"summary", result.summary},
        {"wall_clock_seconds", result.wall_seconds},
        {"status", failed_run ? "run_failed" : (result.checks_passed() ? "ok" : "checks_failed")},
    };
}

std::vector<std::filesystem::path> write_artifacts(const RunResult& result, const std::filesystem::path& dir,
                                                   Format format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InvalidArgument(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
    auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InvalidArgument(fmt::format("cannot write {}", path.string()));
        f << text;
    };
    const json embedded = data_config(result.config);
    std::vector<std::filesystem::path> paths;
    for (const auto& t : result.tables) {
        if (format == Format::csv) {
            const auto path = dir / (t.name + ".csv");
            write(path, fmt::format("# synlat {} {}\n# config: {}\n", kToolVersion, result.subcommand, embedded.dump()) +
                            t.to_csv());
            paths.push_back(path);
        } else {
            const auto path = dir / (t.name + ".json");
            json doc = t.to_json();
            doc["tool_version"] = std::string(kToolVersion);
            doc["subcommand"] = result.subcommand;
            doc["config"] = embedded;
            write(path, doc.dump(2) + "\n");
            paths.push_back(path);
        }
    }
    json m = manifest(result);
    json files = json::array();
    for (const auto& p : paths) files.push_back(p.filename().string());
    m["artifacts"] = std::move(files);
    const auto mpath = dir / "manifest.json";
    write(mpath, m.dump(2) + "\n");
    paths.push_back(mpath);
    return paths;
}

} // namespace synlat::sweep
