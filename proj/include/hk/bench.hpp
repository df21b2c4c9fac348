#pragma once

#include "hk/engine.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace hk {

// One executed run. convergence_time -1 encodes NOT_CONVERGED (steps then
// equals max_steps) or a per-row failure (steps -1, error set; CSV keeps the
// pinned columns either way and the suite continues).
struct SuiteRow {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string generator;
    std::string controller;
    long convergence_time = -1;
    long steps = 0;
    double wall_ms = 0.0;
    std::string error;  // in-memory only
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square residual of the OLS fit
    std::size_t points = 0;
};

struct ScalingResult {
    std::vector<SuiteRow> rows;
    std::optional<ExponentFit> fit;
};

struct SuiteConfig {
    std::string generator;
    std::vector<nlohmann::json> grid;  // one generator-params object per point
    std::string controller = "passive";
    nlohmann::json controller_params = nlohmann::json::object();
    NumericMode mode = NumericMode::Rational;
    std::vector<std::uint64_t> seeds;  // optional replication dimension
    long max_steps = 1000000;
    int workers = 1;
    int bit_budget = kDefaultBitBudget;  // rational mode: per-value overflow cap
};

inline std::optional<ExponentFit> fit_exponent(const std::vector<SuiteRow>& rows);

inline SuiteConfig suite_config_from_json(const nlohmann::json& j) {
    SuiteConfig cfg;
    if (!j.contains("generator") || !j.contains("grid"))
        throw Error(ErrorCode::InvalidParam, "suite config needs 'generator' and 'grid'");
    cfg.generator = j.at("generator").get<std::string>();
    for (const auto& p : j.at("grid")) cfg.grid.push_back(p);
    if (cfg.grid.empty()) throw Error(ErrorCode::InvalidParam, "suite grid must be non-empty");
    if (j.contains("controller")) cfg.controller = j.at("controller").get<std::string>();
    if (j.contains("controller_params")) cfg.controller_params = j.at("controller_params");
    if (j.contains("mode")) cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("seeds"))
        for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<long>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("bit_budget")) cfg.bit_budget = j.at("bit_budget").get<int>();
    if (cfg.bit_budget < 1) throw Error(ErrorCode::InvalidParam, "bit_budget must be positive");
    return cfg;
}

template <class S>
SuiteRow run_suite_row(const InstanceSpec& spec, const std::string& controller,
                       const nlohmann::json& controller_params, long max_steps,
                       int bit_budget = kDefaultBitBudget) {
    SuiteRow row;
    row.n = spec.n;
    row.m = spec.m;
    row.generator = spec.name;
    row.controller = controller;
    auto ctrl = make_controller<S>(controller, controller_params);
    RunOptions opts;
    opts.max_steps = max_steps;
    opts.trajectory = false;
    opts.bit_budget = bit_budget;
    auto start = std::chrono::steady_clock::now();
    auto rec = run(to_state<S>(spec), *ctrl, opts);
    auto stop = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    row.convergence_time = rec.convergence_time.value_or(-1);
    row.steps = rec.steps_executed;
    return row;
}

inline ScalingResult run_suite(const SuiteConfig& cfg) {
    struct Task {
        nlohmann::json params;
        nlohmann::json controller_params;
    };
    std::vector<Task> tasks;
    for (const auto& point : cfg.grid) {
        if (cfg.seeds.empty()) {
            tasks.push_back({point, cfg.controller_params});
        } else {
            for (auto seed : cfg.seeds) {
                Task t{point, cfg.controller_params};
                if (!t.params.contains("seed")) t.params["seed"] = seed;
                if (cfg.controller == "random") t.controller_params["seed"] = seed;
                tasks.push_back(std::move(t));
            }
        }
    }

    std::vector<SuiteRow> rows(tasks.size());
    auto execute = [&](std::size_t i) {
        try {
            InstanceSpec spec = make_instance(cfg.generator, tasks[i].params);
            if (cfg.mode == NumericMode::Rational)
                rows[i] = run_suite_row<Rational>(spec, cfg.controller,
                                                  tasks[i].controller_params, cfg.max_steps,
                                                  cfg.bit_budget);
            else
                rows[i] = run_suite_row<double>(spec, cfg.controller,
                                                tasks[i].controller_params, cfg.max_steps,
                                                cfg.bit_budget);
        } catch (const std::exception& e) {
            rows[i].generator = cfg.generator;
            rows[i].controller = cfg.controller;
            rows[i].convergence_time = -1;
            rows[i].steps = -1;
            rows[i].error = e.what();
        }
    };

    int workers = std::max(1, cfg.workers);
    if (workers == 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) execute(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                execute(i);
            }
        };
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ScalingResult result;
    result.rows = std::move(rows);
    result.fit = fit_exponent(result.rows);
    return result;
}

// OLS slope of log T against log n over converged rows with T > 0; needs at
// least three distinct n values, otherwise the fit is omitted.
inline std::optional<ExponentFit> fit_exponent(const std::vector<SuiteRow>& rows) {
    std::vector<std::pair<double, double>> pts;
    std::set<std::size_t> distinct;
    for (const auto& r : rows) {
        if (r.convergence_time <= 0) continue;
        pts.emplace_back(std::log(static_cast<double>(r.n)),
                         std::log(static_cast<double>(r.convergence_time)));
        distinct.insert(r.n);
    }
    if (distinct.size() < 3) return std::nullopt;
    double k = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ExponentFit fit;
    fit.points = pts.size();
    fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / k;
    double ss = 0;
    for (const auto& [x, y] : pts) {
        double e = y - (fit.intercept + fit.slope * x);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / k);
    return fit;
}

inline const char* kRowsCsvHeader = "n,m,generator,controller,convergence_time,steps,wall_ms";

inline void write_rows_csv(std::ostream& os, const std::vector<SuiteRow>& rows) {
    os << kRowsCsvHeader << "\n";
    for (const auto& r : rows)
        os << r.n << "," << r.m << "," << r.generator << "," << r.controller << ","
           << r.convergence_time << "," << r.steps << "," << format_double(r.wall_ms) << "\n";
}

inline std::vector<SuiteRow> read_rows_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kRowsCsvHeader)
        throw Error(ErrorCode::InvalidParam, "results file lacks the expected CSV header");
    std::vector<SuiteRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7)
            throw Error(ErrorCode::InvalidParam, "bad results row: " + line);
        SuiteRow r;
        r.n = std::stoull(cells[0]);
        r.m = std::stoull(cells[1]);
        r.generator = cells[2];
        r.controller = cells[3];
        r.convergence_time = std::stol(cells[4]);
        r.steps = std::stol(cells[5]);
        r.wall_ms = std::stod(cells[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline nlohmann::ordered_json summary_json(const ScalingResult& result) {
    nlohmann::ordered_json j;
    j["schema"] = "hk-bench/1";
    j["rows"] = result.rows.size();
    std::size_t converged = 0, failed = 0;
    for (const auto& r : result.rows) {
        if (r.convergence_time >= 0) ++converged;
        if (!r.error.empty()) ++failed;
    }
    j["converged"] = converged;
    j["failures"] = failed;
    if (result.fit) {
        nlohmann::ordered_json f;
        f["slope"] = result.fit->slope;
        f["intercept"] = result.fit->intercept;
        f["residual"] = result.fit->residual;
        f["points"] = result.fit->points;
        j["exponent"] = std::move(f);
    } else {
        j["exponent"] = nullptr;
    }
    return j;
}

}  // namespace hk
