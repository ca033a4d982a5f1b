#include <doctest.h>

#include <cstdio>
#include <memory>
#include <random>

#include "fracpar/config.hpp"
#include "fracpar/io.hpp"

using namespace fracpar;

TEST_CASE("config: sections, values, lists, defaults") {
    const std::string text =
        "# experiment\n"
        "[operator]\n"
        "kind = interval_dirichlet\n"
        "alpha = 1.5   # laguerre only\n"
        "[grids]\n"
        "M = 32\n"
        "N = 64\n"
        "[s-values]\n"
        "s = 0.25 0.5 0.75\n";
    Config cfg = Config::parse_string(text);
    CHECK(cfg.get("operator", "kind") == "interval_dirichlet");
    CHECK(cfg.get_num("operator", "alpha") == doctest::Approx(1.5));
    CHECK(cfg.get_int("grids", "M") == 32);
    CHECK(cfg.get_int_or("grids", "K", 16) == 16);
    const auto s = cfg.get_list("s-values", "s");
    REQUIRE(s.size() == 3);
    CHECK(s[1] == doctest::Approx(0.5));
    CHECK_FALSE(cfg.has("operator", "zeta"));
    CHECK_THROWS_AS(cfg.get("operator", "zeta"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.get("nope", "x"), std::invalid_argument);
}

TEST_CASE("config: parse errors carry line positions") {
    try {
        Config::parse_string("[operator]\nkind interval\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(Config::parse_string("x = 1\n"), ConfigError);       // no section
    CHECK_THROWS_AS(Config::parse_string("[a\nk = v\n"), ConfigError);   // unterminated
    CHECK_THROWS_AS(Config::parse_string("[a]\nk = 1\nk = 2\n"), ConfigError);
    Config cfg = Config::parse_string("[a]\nk = notanumber\n");
    CHECK_THROWS_AS(cfg.get_num("a", "k"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.get_int("a", "k"), std::invalid_argument);
}

TEST_CASE("io: eigensystem blob round trip") {
    OperatorSpec spec;
    spec.kind = OperatorKind::interval_dirichlet;
    EigenSystem es = build_eigensystem(spec, 8, 32);
    const std::string base = "/tmp/fracpar_test_es";
    io::write_eigensystem(base, es);
    EigenSystem back = io::read_eigensystem(base);
    CHECK(back.spec.kind == es.spec.kind);
    CHECK(back.modes() == es.modes());
    CHECK(back.grid_size() == es.grid_size());
    CHECK((back.x - es.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.w - es.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.lambda - es.lambda).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.phi - es.phi).cwiseAbs().maxCoeff() == 0.0);
    std::remove((base + ".bin").c_str());
    std::remove((base + ".json").c_str());
}

TEST_CASE("io: field blob round trip rebuilds the eigensystem") {
    OperatorSpec spec;
    spec.kind = OperatorKind::interval_dirichlet;
    auto es = std::make_shared<const EigenSystem>(build_eigensystem(spec, 8, 32));
    TimeGrid tg(16, 4.0);
    std::mt19937 rng(5);
    SpaceTimeField u = random_band_limited_field(tg, es, rng);
    const std::string base = "/tmp/fracpar_test_field";
    io::write_field(base, u);
    SpaceTimeField back = io::read_field(base);
    CHECK(back.time == tg);
    CHECK(back.space->modes() == 8);
    CHECK((back.values - u.values).cwiseAbs().maxCoeff() == 0.0);
    std::remove((base + ".bin").c_str());
    std::remove((base + ".json").c_str());
}

TEST_CASE("io: corrupted magic is rejected") {
    const std::string base = "/tmp/fracpar_test_bad";
    {
        std::FILE* f = std::fopen((base + ".bin").c_str(), "wb");
        std::fputs("NOPE", f);
        std::fclose(f);
        std::FILE* j = std::fopen((base + ".json").c_str(), "w");
        std::fputs("{\"schema\":\"fracpar-eigensystem/1\",\"operator\":{"
                   "\"kind\":\"interval_dirichlet\",\"alpha\":1.5,"
                   "\"lambda_param\":3.0,\"x_lo\":0,\"x_hi\":0,\"K\":4,\"N\":16},"
                   "\"zero_mean_mode\":false,\"eigen_shift\":0.0,"
                   "\"truncation\":\"\"}",
                   j);
        std::fclose(j);
    }
    CHECK_THROWS_AS(io::read_eigensystem(base), std::runtime_error);
    std::remove((base + ".bin").c_str());
    std::remove((base + ".json").c_str());
}
