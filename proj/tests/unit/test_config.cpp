#include <doctest.h>

#include "twres/commands.hpp"

#include <cstdlib>

using namespace twres;

TEST_CASE("config parsing and defaults") {
    auto c = parse_config("[field]\np = 2\ne = 2\neisenstein = -2, 0, 1\n[pipeline]\nregime = even\ne_max = 4\n");
    CHECK(c.regime == Regime::Even);
    CHECK(c.trunc.e_max == 4);
    CHECK(c.trunc.b_window == 5);
    CHECK(parse_config("[field]\np = 3\neisenstein = -3, 1\n").regime == Regime::Odd);
    // round trip
    auto d = parse_config(c.to_ini());
    CHECK(d.to_ini() == c.to_ini());
    CHECK(c.to_ini(false).find("workers") == std::string::npos);
}

TEST_CASE("config errors name the key path") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("[pipeline]\nk_max = -1\n").find("pipeline.k_max") != std::string::npos);
    CHECK(message("[pipeline]\nbogus = 1\n").find("pipeline.bogus") != std::string::npos);
    CHECK(message("[output]\nformat = xml\n").find("output.format") != std::string::npos);
    CHECK(message("[field]\np = 2\ne = 1\neisenstein = -2, 1\n[pipeline]\nregime = even\n").find("pipeline.regime") !=
          std::string::npos);
}

TEST_CASE("output dir env override") {
    RunConfig c;
    c.dir = "from_config";
    unsetenv("TWRES_OUTPUT_DIR");
    CHECK(output_dir(c) == "from_config");
    setenv("TWRES_OUTPUT_DIR", "from_env", 1);
    CHECK(output_dir(c) == "from_env");
    unsetenv("TWRES_OUTPUT_DIR");
}

TEST_CASE("wfactor rows, k < 0 gives volume 0") {
    RunConfig c;
    auto t = wfactor_table(c, "1,0;0,1", std::nullopt, {-2, -1, 0, 3}, 0);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0][3] == "0");
    CHECK(t.rows[1][3] == "0");
    CHECK(t.rows[2][3] == "1");
    CHECK(t.rows[3][3] == "7");
    CHECK(t.csv().rfind("k,lattice_i,", 0) == 0);
    CHECK(t.json().size() == 4);
}

TEST_CASE("residue report on the trivial-lambda odd pipeline") {
    RunConfig c;
    c.lambda = LambdaChoice::Trivial;
    c.trunc.e_max = 5;
    c.trunc.b_window = 6;
    auto j = nlohmann::json::parse(render_residue(c));
    CHECK(j["regime"] == "odd-factorized");
    CHECK(j["k0"] == 0);
    CHECK(j["P"] == nlohmann::json::array({"1/3", "4/3"}));
    CHECK(j["laurent"][0]["order"] == -2);
    CHECK(j["laurent"][0]["rational"] == "1/12");
    CHECK(j["checks"]["reexpansion_exact"] == true);
    CHECK(j.contains("closed_form"));
}
