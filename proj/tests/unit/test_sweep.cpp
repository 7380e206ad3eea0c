#include "synlat/errors.hpp"
#include "synlat/sweep.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace synlat;
namespace sw = synlat::sweep;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

json small_dynamics(unsigned workers) {
    return json{{"L", 6}, {"s_grid", "0,0.01,0.1"}, {"omega_t", "0,5"}, {"realizations", 3}, {"workers", workers}};
}

} // namespace

TEST_SUITE("sweep") {

TEST_CASE("number formatting round-trips doubles") {
    CHECK(sw::format_number(0.1) == "0.10000000000000001");
    CHECK(sw::format_number(2.0) == "2");
    CHECK(std::stod(sw::format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("grid parsing") {
    const auto g = sw::parse_grid("log:1e-3:1e-1:3");
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(1e-2));
    CHECK(sw::parse_grid("lin:0:1:5")[2] == doctest::Approx(0.5));
    const auto list = sw::parse_grid("1, sqrt(2), 3");
    CHECK(list[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(sw::parse_grid(json::array({0.5, 1})).size() == 2);
    CHECK(sw::parse_grid(json(4.0)).size() == 1);
    CHECK_THROWS_AS(sw::parse_grid("log:1:2"), InvalidArgument);
    CHECK_THROWS_AS(sw::parse_grid("1,abc"), InvalidArgument);
}

TEST_CASE("config resolution") {
    const auto d = sw::default_config("localization");
    CHECK(d["energy"].get<double>() == 1.8);
    CHECK(d["master_seed"] == 1);
    CHECK_THROWS_AS(sw::resolve_config("bands", json{{"no_such_key", 1}}), InvalidArgument);
    CHECK_THROWS_AS(sw::resolve_config("bands", json{{"kpoints", "many"}}), InvalidArgument);
    CHECK_THROWS_AS(sw::resolve_config("bands", json{{"lattice", "kagome"}}), InvalidArgument);
    CHECK_THROWS_AS(sw::resolve_config("nope", json::object()), InvalidArgument);
    const auto r = sw::resolve_config("dynamics", json{{"L", 12}});
    CHECK(r["L"] == 12);
    CHECK(sw::resolve_config("dynamics", r) == r);
    CHECK(sw::value_from_text("dynamics", "L", "7") == 7);
}

TEST_CASE("outputs do not depend on the worker count") {
    const auto one = sw::run("dynamics", small_dynamics(1));
    const auto three = sw::run("dynamics", small_dynamics(3));
    REQUIRE(one.tables.size() == three.tables.size());
    for (std::size_t i = 0; i < one.tables.size(); ++i) CHECK(one.tables[i].to_csv() == three.tables[i].to_csv());

    const auto dir = std::filesystem::temp_directory_path() / "synlat_sweep_test";
    std::filesystem::remove_all(dir);
    const auto a = sw::write_artifacts(one, dir / "a", sw::Format::csv);
    const auto b = sw::write_artifacts(three, dir / "b", sw::Format::csv);
    int manifests = 0;
    for (const auto& p : std::filesystem::directory_iterator(dir / "a")) manifests += p.path().filename() == "manifest.json";
    CHECK(manifests == 1);
    for (const auto& p : a) {
        if (p.extension() != ".csv") continue;
        const auto text = slurp(p);
        CHECK(text == slurp(dir / "b" / p.filename()));
        CHECK(text.rfind("# synlat ", 0) == 0);
        CHECK(text.find('\r') == std::string::npos);
    }
    const auto m = json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(m["subcommand"] == "dynamics");
    CHECK(m["status"] == "ok");
    CHECK(m.contains("seed_derivation"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("json tables") {
    sw::Table t("demo", {"x", "y"});
    t.add_row({1.5, "a"});
    const auto j = t.to_json();
    CHECK(j.dump().find("1.5") != std::string::npos);
    CHECK(t.to_csv() == "x,y\n1.5,a\n");
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
}

TEST_CASE("quick figure reproductions pass") {
    for (const char* id : {"fig1", "fig2"}) {
        const auto r = sw::reproduce(id);
        CAPTURE(id);
        CHECK_FALSE(r.checks.empty());
        CHECK(r.checks_passed());
    }
    CHECK_THROWS_AS(sw::reproduce("fig9"), InvalidArgument);
    CHECK_THROWS_AS(sw::reproduce("fig1", json{{"kpoints", 4}}), InvalidArgument);
}

}
