#include "hk/bench.hpp"

#include <doctest.h>

#include <cstring>
#include <sstream>

namespace {

nlohmann::json tiny_config() {
    nlohmann::json cfg;
    cfg["generator"] = "equidistant";
    cfg["grid"] = nlohmann::json::array({nlohmann::json{{"n", 3}}, nlohmann::json{{"n", 5}},
                                         nlohmann::json{{"n", 8}}});
    cfg["controller"] = "passive";
    cfg["mode"] = "rational";
    return cfg;
}

}  // namespace

TEST_CASE("suite config parsing") {
    auto cfg = hk::suite_config_from_json(tiny_config());
    CHECK(cfg.generator == "equidistant");
    CHECK(cfg.grid.size() == 3);
    CHECK(cfg.controller == "passive");
    CHECK(cfg.mode == hk::NumericMode::Rational);

    nlohmann::json missing;
    missing["grid"] = nlohmann::json::array({nlohmann::json{{"n", 3}}});
    CHECK_THROWS_AS(hk::suite_config_from_json(missing), hk::Error);
    nlohmann::json empty = tiny_config();
    empty["grid"] = nlohmann::json::array();
    CHECK_THROWS_AS(hk::suite_config_from_json(empty), hk::Error);

    CHECK(cfg.bit_budget == hk::kDefaultBitBudget);
    nlohmann::json budgeted = tiny_config();
    budgeted["bit_budget"] = 8192;
    CHECK(hk::suite_config_from_json(budgeted).bit_budget == 8192);
    budgeted["bit_budget"] = 0;
    CHECK_THROWS_AS(hk::suite_config_from_json(budgeted), hk::Error);
}

TEST_CASE("suite bit budget caps rational growth per row") {
    // equidistant n=9 passive needs denominators beyond a 2-bit cap
    nlohmann::json j = tiny_config();
    j["grid"] = nlohmann::json::array({nlohmann::json{{"n", 9}}});
    j["bit_budget"] = 2;
    auto result = hk::run_suite(hk::suite_config_from_json(j));
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].convergence_time == -1);
    CHECK(result.rows[0].steps == -1);
    CHECK(result.rows[0].error.find("OVERFLOW") != std::string::npos);

    j["bit_budget"] = 4096;
    auto ok = hk::run_suite(hk::suite_config_from_json(j));
    REQUIRE(ok.rows.size() == 1);
    CHECK(ok.rows[0].error.empty());
    CHECK(ok.rows[0].convergence_time >= 1);
}

TEST_CASE("suite rows follow grid order and record convergence") {
    auto cfg = hk::suite_config_from_json(tiny_config());
    auto result = hk::run_suite(cfg);
    REQUIRE(result.rows.size() == 3);
    CHECK(result.rows[0].n == 3);
    CHECK(result.rows[1].n == 5);
    CHECK(result.rows[2].n == 8);
    for (const auto& row : result.rows) {
        CHECK(row.error.empty());
        CHECK(row.convergence_time >= 1);
        CHECK(row.steps == row.convergence_time);
        CHECK(row.generator == "equidistant");
        CHECK(row.controller == "passive");
    }
    CHECK(result.rows[0].convergence_time == 2);
    REQUIRE(result.fit.has_value());
    CHECK(result.fit->points == 3);

    auto j = hk::summary_json(result);
    CHECK(j.at("schema") == "hk-bench/1");
    CHECK(j.at("rows") == 3);
    CHECK(j.at("converged") == 3);
    CHECK(j.at("failures") == 0);
    CHECK(j.at("exponent").contains("slope"));
}

TEST_CASE("seed replication multiplies the grid") {
    auto raw = tiny_config();
    raw["generator"] = "random";
    raw["grid"] = nlohmann::json::array(
        {nlohmann::json{{"n", 4}, {"span", 2}}, nlohmann::json{{"n", 6}, {"span", 2}}});
    raw["seeds"] = nlohmann::json::array({1, 2, 3});
    auto cfg = hk::suite_config_from_json(raw);
    auto result = hk::run_suite(cfg);
    REQUIRE(result.rows.size() == 6);
    CHECK(result.rows[0].n == 4);
    CHECK(result.rows[2].n == 4);
    CHECK(result.rows[3].n == 6);
}

TEST_CASE("partial failures keep the suite alive") {
    auto raw = tiny_config();
    raw["controller"] = "mass";  // equidistant generators default to m = 0 < 9n
    auto cfg = hk::suite_config_from_json(raw);
    auto result = hk::run_suite(cfg);
    REQUIRE(result.rows.size() == 3);
    for (const auto& row : result.rows) {
        CHECK_FALSE(row.error.empty());
        CHECK(row.convergence_time == -1);
        CHECK(row.steps == -1);
    }
    CHECK_FALSE(result.fit.has_value());
    CHECK(hk::summary_json(result).at("exponent").is_null());
    CHECK(hk::summary_json(result).at("failures") == 3);
}

TEST_CASE("csv round-trip re-fits bit-for-bit") {
    auto raw = tiny_config();
    raw["mode"] = "float64";
    auto result = hk::run_suite(hk::suite_config_from_json(raw));
    REQUIRE(result.fit.has_value());

    std::ostringstream os;
    hk::write_rows_csv(os, result.rows);
    std::string csv = os.str();
    CHECK(csv.rfind("n,m,generator,controller,convergence_time,steps,wall_ms\n", 0) == 0);

    std::istringstream is(csv);
    auto rows = hk::read_rows_csv(is);
    REQUIRE(rows.size() == result.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].n == result.rows[i].n);
        CHECK(rows[i].convergence_time == result.rows[i].convergence_time);
        CHECK(std::memcmp(&rows[i].wall_ms, &result.rows[i].wall_ms, sizeof(double)) == 0);
    }
    auto refit = hk::fit_exponent(rows);
    REQUIRE(refit.has_value());
    CHECK(std::memcmp(&refit->slope, &result.fit->slope, sizeof(double)) == 0);
    CHECK(std::memcmp(&refit->intercept, &result.fit->intercept, sizeof(double)) == 0);
    CHECK(std::memcmp(&refit->residual, &result.fit->residual, sizeof(double)) == 0);

    std::ostringstream again;
    hk::write_rows_csv(again, rows);
    CHECK(again.str() == csv);

    std::istringstream bad("wrong,header\n");
    CHECK_THROWS_AS(hk::read_rows_csv(bad), hk::Error);
}

TEST_CASE("fewer than three sizes yields no exponent") {
    auto raw = tiny_config();
    raw["grid"] = nlohmann::json::array({nlohmann::json{{"n", 3}}, nlohmann::json{{"n", 5}}});
    auto result = hk::run_suite(hk::suite_config_from_json(raw));
    CHECK_FALSE(result.fit.has_value());
}

TEST_CASE("worker pool preserves row order and results") {
    auto raw = tiny_config();
    raw["mode"] = "float64";
    raw["seeds"] = nlohmann::json::array({1, 2});
    auto cfg = hk::suite_config_from_json(raw);
    auto sequential = hk::run_suite(cfg);
    cfg.workers = 4;
    auto threaded = hk::run_suite(cfg);
    REQUIRE(sequential.rows.size() == threaded.rows.size());
    for (std::size_t i = 0; i < sequential.rows.size(); ++i) {
        CHECK(sequential.rows[i].n == threaded.rows[i].n);
        CHECK(sequential.rows[i].convergence_time == threaded.rows[i].convergence_time);
        CHECK(sequential.rows[i].steps == threaded.rows[i].steps);
    }
    REQUIRE(threaded.fit.has_value());
    CHECK(threaded.fit->slope == sequential.fit->slope);
}
