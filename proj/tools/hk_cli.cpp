#include "hk/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

struct InstanceArgs {
    std::string instance_path;
    std::string gen;
    long n = -1;
    long k = -1;
    long copy_k = -1;
    long c2 = -1;
    long span = -1;
    long m = -1;
    std::string alpha;
    std::uint64_t seed = 0;
    bool seed_set = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--instance", instance_path, "instance JSON file");
        cmd->add_option("--gen", gen,
                        "generator: equidistant|dumbbell|three_cluster|not_too_fast|"
                        "dumbbell_farm|equidistant_farm|random");
        cmd->add_option("--n", n, "agent count (generator parameter)");
        cmd->add_option("--k", k, "cluster parameter k");
        cmd->add_option("--copy-k", copy_k, "per-copy dumbbell parameter for farms");
        cmd->add_option("--c2", c2, "equidistant farm parameter");
        cmd->add_option("--span", span, "random generator opinion span");
        cmd->add_option("--alpha", alpha, "farm exponent alpha as p/q");
        cmd->add_option("--m", m, "strategic agent count override");
        cmd->add_option("--seed", seed, "seed for random generation")
            ->each([this](const std::string&) { seed_set = true; });
    }

    hk::InstanceSpec resolve() const {
        if (!instance_path.empty()) {
            auto spec = hk::load_instance(instance_path);
            if (m >= 0) spec.m = static_cast<std::size_t>(m);
            return spec;
        }
        if (gen.empty())
            throw hk::Error(hk::ErrorCode::InvalidParam,
                            "provide --instance FILE or --gen NAME");
        nlohmann::json params = nlohmann::json::object();
        if (n >= 0) params["n"] = n;
        if (k >= 0) params["k"] = k;
        if (copy_k >= 0) params["copy_k"] = copy_k;
        if (c2 >= 0) params["c2"] = c2;
        if (span >= 0) params["span"] = span;
        if (!alpha.empty()) params["alpha"] = alpha;
        if (m >= 0) params["m"] = m;
        if (seed_set) params["seed"] = seed;
        return hk::make_instance(gen, params);
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw hk::Error(hk::ErrorCode::InvalidParam, "cannot write " + path);
    out << text;
}

struct SimulateArgs {
    InstanceArgs instance;
    std::string controller = "passive";
    std::string controller_params = "{}";
    std::string mode;  // empty: instance file mode (default rational)
    long max_steps = 1000000;
    std::string out;
    std::string trajectory_path;
    bool monitors = false;
    bool abort_on_violation = false;
    bool no_trajectory = false;
};

template <class S>
int do_simulate(const hk::InstanceSpec& spec, const SimulateArgs& args) {
    auto ctrl = hk::make_controller<S>(args.controller,
                                       nlohmann::json::parse(args.controller_params));
    hk::RunOptions opts;
    opts.max_steps = args.max_steps;
    opts.monitors = args.monitors;
    opts.monitor_policy = args.abort_on_violation ? hk::MonitorPolicy::Abort
                                                  : hk::MonitorPolicy::Record;
    if (args.no_trajectory) opts.trajectory = false;
    else if (!args.trajectory_path.empty()) opts.trajectory = true;
    auto rec = hk::run(hk::to_state<S>(spec), *ctrl, opts);
    write_text(args.out, hk::record_to_json(rec, spec, args.controller, opts).dump(2) + "\n");
    if (!args.trajectory_path.empty()) {
        std::ofstream tout(args.trajectory_path);
        if (!tout)
            throw hk::Error(hk::ErrorCode::InvalidParam,
                            "cannot write " + args.trajectory_path);
        hk::write_trajectory_csv(tout, rec);
    }
    return rec.convergence_time ? kExitOk : kExitNotConverged;
}

struct SearchArgs {
    InstanceArgs instance;
    std::string mode;
    int horizon = 1;
    long node_cap = 500000;
    std::string out;
};

template <class S>
int do_search(const hk::InstanceSpec& spec, const SearchArgs& args) {
    hk::SearchOptions opts;
    opts.horizon = args.horizon;
    opts.node_cap = args.node_cap;
    auto outcome = hk::bounded_search(hk::to_state<S>(spec), opts);
    nlohmann::ordered_json j;
    j["schema"] = "hk-search/1";
    j["horizon"] = args.horizon;
    auto dir = nlohmann::ordered_json::array();
    for (const auto& p : outcome.first.positions) {
        if (!p) dir.push_back(nullptr);
        else if constexpr (hk::scalar_traits<S>::mode == hk::NumericMode::Rational)
            dir.push_back(hk::format_rational(*p));
        else dir.push_back(*p);
    }
    j["directive"] = std::move(dir);
    if (outcome.converge_steps) j["converges_at"] = *outcome.converge_steps;
    else j["converges_at"] = nullptr;
    j["nodes"] = outcome.nodes;
    write_text(args.out, j.dump(2) + "\n");
    return kExitOk;
}

hk::NumericMode pick_mode(const std::string& flag, const hk::InstanceSpec& spec) {
    if (!flag.empty()) return hk::mode_from_string(flag);
    return spec.mode;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-confidence opinion dynamics: simulate, benchmark, verify, search"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "run one instance to convergence");
    sim.instance.attach(sim_cmd);
    sim_cmd->add_option("--controller", sim.controller, "controller name");
    sim_cmd->add_option("--controller-params", sim.controller_params,
                        "controller parameters as JSON");
    sim_cmd->add_option("--mode", sim.mode, "numeric mode: rational|float64");
    sim_cmd->add_option("--max-steps", sim.max_steps, "step limit");
    sim_cmd->add_option("--out", sim.out, "run record JSON path (default stdout)");
    sim_cmd->add_option("--trajectory", sim.trajectory_path, "trajectory CSV path");
    sim_cmd->add_flag("--monitors", sim.monitors, "evaluate invariant monitors");
    sim_cmd->add_flag("--abort-on-violation", sim.abort_on_violation,
                      "stop with an error on the first monitor violation");
    sim_cmd->add_flag("--no-trajectory", sim.no_trajectory, "skip trajectory recording");

    struct BenchArgs {
        std::string config;
        std::string refit;
        std::string out;
        std::string summary;
        int workers = 0;
    } bench;
    auto* bench_cmd = app.add_subcommand("bench", "run a scaling suite from a config");
    bench_cmd->add_option("--config", bench.config, "suite config JSON");
    bench_cmd->add_option("--refit", bench.refit, "re-fit an existing results CSV");
    bench_cmd->add_option("--out", bench.out, "results CSV path (default stdout)");
    bench_cmd->add_option("--summary", bench.summary, "summary JSON path");
    bench_cmd->add_option("--workers", bench.workers, "concurrent runs");

    struct VerifyArgs {
        std::string selector = "all";
        std::size_t seeds = 500;
        std::string out;
    } verify;
    auto* verify_cmd = app.add_subcommand("verify", "run the property suites");
    verify_cmd->add_option("selector", verify.selector,
                           "invariants|golden|mass|three-cluster|not-too-fast|hybrid-splits|all");
    verify_cmd->add_option("--seeds", verify.seeds, "instance count for the invariant suite");
    verify_cmd->add_option("--out", verify.out, "report JSON path (default stdout)");

    SearchArgs search;
    auto* search_cmd = app.add_subcommand("search", "exhaustive directive search");
    search.instance.attach(search_cmd);
    search_cmd->add_option("--mode", search.mode, "numeric mode: rational|float64");
    search_cmd->add_option("--horizon", search.horizon, "look-ahead depth (1..4)");
    search_cmd->add_option("--node-cap", search.node_cap, "search node budget");
    search_cmd->add_option("--out", search.out, "outcome JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim_cmd->parsed()) {
            auto spec = sim.instance.resolve();
            return pick_mode(sim.mode, spec) == hk::NumericMode::Rational
                       ? do_simulate<hk::Rational>(spec, sim)
                       : do_simulate<double>(spec, sim);
        }
        if (bench_cmd->parsed()) {
            if (bench.config.empty() == bench.refit.empty())
                throw hk::Error(hk::ErrorCode::InvalidParam,
                                "bench needs exactly one of --config or --refit");
            hk::ScalingResult result;
            if (!bench.refit.empty()) {
                std::ifstream in(bench.refit);
                if (!in)
                    throw hk::Error(hk::ErrorCode::InvalidParam, "cannot read " + bench.refit);
                result.rows = hk::read_rows_csv(in);
                result.fit = hk::fit_exponent(result.rows);
            } else {
                std::ifstream in(bench.config);
                if (!in)
                    throw hk::Error(hk::ErrorCode::InvalidParam, "cannot read " + bench.config);
                nlohmann::json cfg_json;
                in >> cfg_json;
                auto cfg = hk::suite_config_from_json(cfg_json);
                if (bench.workers > 0) cfg.workers = bench.workers;
                result = hk::run_suite(cfg);
                std::ostringstream csv;
                hk::write_rows_csv(csv, result.rows);
                write_text(bench.out, csv.str());
            }
            std::string summary = hk::summary_json(result).dump(2) + "\n";
            if (!bench.summary.empty()) write_text(bench.summary, summary);
            else if (!bench.refit.empty()) write_text("", summary);
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            auto reports = hk::run_verify(verify.selector, verify.seeds);
            nlohmann::ordered_json j;
            j["schema"] = "hk-verify/1";
            j["reports"] = hk::reports_to_json(reports);
            bool all_pass = true;
            for (const auto& r : reports) all_pass = all_pass && r.pass;
            j["pass"] = all_pass;
            write_text(verify.out, j.dump(2) + "\n");
            return all_pass ? kExitOk : kExitError;
        }
        if (search_cmd->parsed()) {
            auto spec = search.instance.resolve();
            return pick_mode(search.mode, spec) == hk::NumericMode::Rational
                       ? do_search<hk::Rational>(spec, search)
                       : do_search<double>(spec, search);
        }
    } catch (const hk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == hk::ErrorCode::NonConvergence ? kExitNotConverged : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
