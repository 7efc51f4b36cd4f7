#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "arccrit/error.hpp"
#include "arccrit/io.hpp"
#include "test_support.hpp"

using namespace arccrit;
using namespace arccrit::testing;
using nlohmann::json;

namespace {

std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Message of the SpecError thrown by parse_germ_spec, or "" when it parses.
std::string germ_error(const json& doc)
{
    try {
        (void)parse_germ_spec(doc.dump());
    } catch (const SpecError& e) {
        return e.what();
    }
    return "";
}

json cusp_doc() { return json::parse(germ_spec_json(builtin("cusp"))); }

} // namespace

TEST_CASE("series literals")
{
    CHECK(parse_series("t") == t_pow(1));
    CHECK(parse_series("-3/2*t^(5/2)") == t_pow(5, 2, -3, 2));
    CHECK(parse_series("t + t^2 - 2*t^(7/3)") == t_pow(1) + t_pow(2) - t_pow(7, 3, 2));
    CHECK(parse_series("0") == zero());
    const PuiseuxSeries f = parse_series("t^(3/2) + O(t^4)");
    CHECK(f.truncation() == Exponent(4));
    CHECK_THROWS_AS((void)parse_series("t^(2/4)"), SpecError);
    CHECK_THROWS_AS((void)parse_series("2/4*t"), SpecError);
    CHECK_THROWS_AS((void)parse_series("t^(1/0)"), SpecError);
    CHECK_THROWS_AS((void)parse_series("t +"), SpecError);
    CHECK_THROWS_AS((void)parse_series("x"), SpecError);
}

TEST_CASE("property: series literals round-trip through to_string")
{
    std::mt19937_64 rng(9);
    for (int n = 0; n < 200; ++n) {
        const PuiseuxSeries f = random_series(rng, Exponent(0), Exponent(5), 6, 5);
        CAPTURE(to_string(f));
        CHECK(parse_series(to_string(f), f.truncation()) == f);
    }
}

TEST_CASE("arc literals")
{
    const Arc a = parse_arc("(t, t^2)");
    CHECK(a.dimension() == 2);
    CHECK_FALSE(a.distance_parametrized());
    const Arc b = parse_arc("(3/5*t, 4/5*t)");
    CHECK(b.distance_parametrized());
    CHECK(parse_arc(format_arc(b)) == b);
    CHECK_THROWS_AS((void)parse_arc("t, t"), SpecError);
    CHECK_THROWS_AS((void)parse_arc("(1, t)"), Error);
}

TEST_CASE("germ spec round trip")
{
    for (const std::string& name : {"plane", "cone", "horn", "cusp", "complex_cusp"}) {
        CAPTURE(name);
        const GermModel g = builtin(name);
        CHECK(parse_germ_spec(germ_spec_json(g)) == g);
    }
}

TEST_CASE("checked-in cusp fixture matches the builtin")
{
    const std::filesystem::path p = std::filesystem::path(ARCCRIT_SOURCE_DIR) / "data/germs/cusp_3_2.json";
    CHECK(parse_germ_spec(read_text(p)) == builtin("cusp", {q(3), q(2)}));
    CHECK(resolve_germ(p.string()) == builtin("cusp"));
    CHECK(resolve_germ("builtin:cusp:3:2") == builtin("cusp"));
    CHECK(resolve_germ("builtin:horn:3/2") == builtin("horn", {q(3, 2)}));
    CHECK_THROWS_AS((void)resolve_germ("builtin:nope"), Error);
}

TEST_CASE("germ spec errors name the offending field")
{
    SUBCASE("zero coefficient")
    {
        json doc = cusp_doc();
        doc["sheets"][0]["components"][0]["numerator"][0]["coeff"] = "0";
        CHECK(germ_error(doc).find("/sheets/0/components/0/numerator/0/coeff") != std::string::npos);
    }
    SUBCASE("zero denominator")
    {
        json doc = cusp_doc();
        doc["sheets"][1]["components"][0]["numerator"][0]["u_exp"] = {3, 0};
        CHECK(germ_error(doc).find("/sheets/1/components/0/numerator/0/u_exp") != std::string::npos);
    }
    SUBCASE("exponent not in lowest terms")
    {
        json doc = cusp_doc();
        doc["sheets"][0]["components"][0]["numerator"][0]["u_exp"] = {6, 4};
        CHECK(germ_error(doc).find("/sheets/0/components/0/numerator/0/u_exp") != std::string::npos);
    }
    SUBCASE("coefficient not in lowest terms")
    {
        json doc = cusp_doc();
        doc["sheets"][0]["components"][1]["numerator"][0]["coeff"] = "2/2";
        CHECK(germ_error(doc).find("/sheets/0/components/1/numerator/0/coeff") != std::string::npos);
    }
    SUBCASE("unknown field")
    {
        json doc = cusp_doc();
        doc["sheets"][0]["colour"] = "red";
        CHECK(germ_error(doc).find("/sheets/0/colour") != std::string::npos);
    }
    SUBCASE("pancake index out of range")
    {
        json doc = cusp_doc();
        doc["pancakes"]["pancakes"][1]["sheets"][0] = 7;
        CHECK_FALSE(germ_error(doc).empty());
    }
    SUBCASE("syntax error reports line and column")
    {
        try {
            (void)parse_germ_spec("{\n  \"name\": \"x\",\n  oops\n}");
            FAIL("expected SpecError");
        } catch (const SpecError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("line 3") != std::string::npos);
            CHECK(msg.find("column") != std::string::npos);
        }
    }
}

TEST_CASE("run config documents")
{
    const RunConfig defaults;
    CHECK(parse_run_config("{}") == defaults);
    CHECK(parse_run_config(run_config_json(defaults)) == defaults);

    const RunConfig c = parse_run_config(R"({"seed": 17, "scales": {"k_min": 5, "k_max": 9, "base": 0.5}})");
    CHECK(c.seed == 17);
    CHECK(c.scales == ScaleSpec{5, 9, 0.5});
    CHECK(c.outer_scales == defaults.outer_scales);
    CHECK(parse_run_config(run_config_json(c)) == c);

    CHECK_THROWS_AS((void)parse_run_config(R"({"seeds": 1})"), SpecError);
    CHECK_THROWS_AS((void)parse_run_config(R"({"scales": {"k_min": 9, "k_max": 5}})"), SpecError);
    CHECK_THROWS_AS((void)parse_run_config(R"({"snap_tolerance": "big"})"), SpecError);
    CHECK_THROWS_AS((void)parse_run_config("[1, 2]"), SpecError);
}

TEST_CASE("ARCCRIT_CONFIG overrides the defaults")
{
    const std::filesystem::path p = std::filesystem::temp_directory_path() / "arccrit_test_config.json";
    {
        std::ofstream out(p);
        out << R"({"pairs_per_scale": 32, "witness_gap": 0.2})";
    }
    ::setenv("ARCCRIT_CONFIG", p.c_str(), 1);
    const RunConfig c = default_run_config();
    ::unsetenv("ARCCRIT_CONFIG");
    std::filesystem::remove(p);
    CHECK(c.pairs_per_scale == 32);
    CHECK(c.witness_gap == 0.2);
    CHECK(default_run_config() == RunConfig{});
}

TEST_CASE("verdict JSON layout")
{
    const RunConfig config;
    const json doc = json::parse(verdict_json(verdict(builtin("cusp"), 2, config), config));
    CHECK(doc["schema"] == "arccrit-verdict");
    CHECK(doc["version"] == kReportSchemaVersion);
    CHECK(doc["outcome"] == "NotNormallyEmbedded");
    CHECK(doc["budget"] == 2);
    CHECK(doc["arcs"].size() == 2);
    CHECK(doc["reports"].size() == 1);
    CHECK_FALSE(doc["witness"].is_null());
    CHECK(doc["config"] == json::parse(run_config_json(config)));
}
