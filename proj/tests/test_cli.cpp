#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#ifndef HK_CLI_PATH
#error "HK_CLI_PATH must point at the built binary"
#endif

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(HK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace

TEST_CASE("simulate exits zero on convergence and writes the record") {
    auto out = temp_file("hk_cli_sim.json");
    auto traj = temp_file("hk_cli_sim.csv");
    int rc = run_cli("simulate --gen equidistant --n 3 --controller passive --mode rational"
                     " --out " + out.string() + " --trajectory " + traj.string());
    CHECK(rc == 0);
    auto j = read_json(out);
    CHECK(j.at("convergence_time") == 2);
    CHECK(j.at("schema") == "hk-run/1");

    std::ifstream tin(traj);
    std::string header;
    std::getline(tin, header);
    CHECK(header == "t,agent_kind,agent_index,opinion");
    std::filesystem::remove(out);
    std::filesystem::remove(traj);
}

TEST_CASE("usage problems exit with code two") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("simulate --no-such-flag") == 2);
    CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("step-limited runs exit with code three") {
    CHECK(run_cli("simulate --gen equidistant --n 10 --max-steps 2") == 3);
}

TEST_CASE("domain errors exit with code one") {
    CHECK(run_cli("simulate --gen dumbbell --k 5") == 1);
    CHECK(run_cli("simulate --gen equidistant --n 8 --controller contraction") == 1);  // m = 0
    CHECK(run_cli("verify no-such-suite") == 1);
}

TEST_CASE("search reports the exhaustive verdict") {
    auto out = temp_file("hk_cli_search.json");
    int rc = run_cli("search --gen not_too_fast --n 5 --m 1 --horizon 1 --out " + out.string());
    CHECK(rc == 0);
    auto j = read_json(out);
    CHECK(j.at("converges_at").is_null());
    CHECK(j.at("directive").size() == 1);
    std::filesystem::remove(out);
}

TEST_CASE("golden verification suite passes via the CLI") {
    CHECK(run_cli("verify golden") == 0);
}

TEST_CASE("bench writes rows and a summary") {
    auto cfg_path = temp_file("hk_cli_bench_cfg.json");
    auto csv_path = temp_file("hk_cli_bench_rows.csv");
    auto sum_path = temp_file("hk_cli_bench_summary.json");
    {
        nlohmann::json cfg;
        cfg["generator"] = "equidistant";
        cfg["grid"] = nlohmann::json::array(
            {nlohmann::json{{"n", 3}}, nlohmann::json{{"n", 5}}, nlohmann::json{{"n", 8}}});
        cfg["controller"] = "passive";
        cfg["mode"] = "float64";
        std::ofstream out(cfg_path);
        out << cfg.dump();
    }
    int rc = run_cli("bench --config " + cfg_path.string() + " --out " + csv_path.string() +
                     " --summary " + sum_path.string());
    CHECK(rc == 0);

    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "n,m,generator,controller,convergence_time,steps,wall_ms");
    auto summary = read_json(sum_path);
    CHECK(summary.at("rows") == 3);
    CHECK(summary.at("exponent").contains("slope"));

    // refit from the CSV reproduces the exponent exactly
    auto refit_path = temp_file("hk_cli_bench_refit.json");
    rc = run_cli("bench --refit " + csv_path.string() + " --summary " + refit_path.string());
    CHECK(rc == 0);
    auto refit = read_json(refit_path);
    CHECK(refit.at("exponent").at("slope") == summary.at("exponent").at("slope"));

    CHECK(run_cli("bench") == 1);  // neither --config nor --refit

    for (const auto& p : {cfg_path, csv_path, sum_path, refit_path})
        std::filesystem::remove(p);
}
