#pragma once

#include "hk/bench.hpp"

#include <map>

namespace hk {

struct CheckReport {
    std::string name;
    bool pass = true;
    std::string detail;  // first counterexample, or a summary when passing
    nlohmann::ordered_json data = nlohmann::ordered_json::object();

    void fail(const std::string& why) {
        if (pass) {
            pass = false;
            detail = why;
        }
    }
};

// --- golden dumbbell trajectory ------------------------------------------------

// Exact opinions after the first two controlled updates (place at 2, then at
// k-2) of the dumbbell chain, zero-based agent indices.
inline std::vector<Rational> dumbbell_expected_t1(std::size_t k) {
    const long kl = static_cast<long>(k);
    std::vector<Rational> xs(3 * k + 1);
    for (std::size_t j = 0; j < k; ++j) xs[j] = Rational(-1) / (kl + 1);
    xs[k] = 0;
    xs[k + 1] = Rational(5, 4);
    xs[k + 2] = 2;
    xs[k + 3] = Rational(11, 4);
    for (std::size_t j = k + 4; j <= 2 * k; ++j) xs[j] = Rational(static_cast<long>(j) - kl);
    for (std::size_t j = 2 * k + 1; j <= 3 * k; ++j) xs[j] = Rational(kl) + Rational(1, kl + 1);
    return xs;
}

inline std::vector<Rational> dumbbell_expected_t2(std::size_t k) {
    const long kl = static_cast<long>(k);
    const Rational kp1sq = Rational((kl + 1) * (kl + 1));
    std::vector<Rational> xs(3 * k + 1);
    for (std::size_t j = 0; j <= k; ++j) xs[j] = Rational(-kl) / kp1sq;
    xs[k + 1] = Rational(13, 8);
    xs[k + 2] = 2;
    xs[k + 3] = Rational(19, 8);
    xs[k + 4] = Rational(9, 2);
    for (std::size_t j = k + 5; j + 4 <= 2 * k; ++j) xs[j] = Rational(static_cast<long>(j) - kl);
    xs[2 * k - 3] = Rational(kl) - Rational(11, 4);
    xs[2 * k - 2] = Rational(kl - 2);
    xs[2 * k - 1] = Rational(kl) - Rational(5, 4);
    xs[2 * k] = Rational(kl) - Rational(1) / Rational((kl + 1) * (kl + 2));
    for (std::size_t j = 2 * k + 1; j <= 3 * k; ++j) xs[j] = Rational(kl) + Rational(kl) / kp1sq;
    return xs;
}

inline CheckReport verify_golden() {
    CheckReport rep{"golden"};
    std::size_t checked = 0;
    for (std::size_t k : {std::size_t{10}, std::size_t{12}}) {
        InstanceSpec spec = gen_dumbbell(k);
        spec.m = 1;
        auto state = to_state<Rational>(spec);
        DumbbellController<Rational> ctrl;
        RunOptions opts;
        opts.max_steps = 2;
        opts.trajectory = true;
        auto rec = run(state, ctrl, opts);
        if (rec.trajectory.size() < 3) {
            rep.fail("dumbbell k=" + std::to_string(k) + " recorded fewer than two steps");
            continue;
        }
        auto expect1 = dumbbell_expected_t1(k);
        auto expect2 = dumbbell_expected_t2(k);
        for (std::size_t j = 0; j < expect1.size(); ++j) {
            if (!(rec.trajectory[1].nonstrategic[j] == expect1[j]))
                rep.fail("k=" + std::to_string(k) + " t=1 agent " + std::to_string(j) +
                         ": got " + format_rational(rec.trajectory[1].nonstrategic[j]) +
                         ", want " + format_rational(expect1[j]));
            if (!(rec.trajectory[2].nonstrategic[j] == expect2[j]))
                rep.fail("k=" + std::to_string(k) + " t=2 agent " + std::to_string(j) +
                         ": got " + format_rational(rec.trajectory[2].nonstrategic[j]) +
                         ", want " + format_rational(expect2[j]));
            ++checked;
        }
    }
    rep.data["opinions_checked"] = checked;
    if (rep.pass) rep.detail = "both dumbbell trajectories match exactly";
    return rep;
}

// --- invariant suite --------------------------------------------------------------

inline CheckReport verify_invariants(std::size_t instances = 500, long steps = 50,
                                     std::uint64_t base_seed = 20260101) {
    CheckReport rep{"invariants"};
    std::size_t run_count = 0;
    for (std::size_t i = 0; i < instances && rep.pass; ++i) {
        std::uint64_t seed = base_seed + i;
        Rng meta(seed);
        std::size_t n = 2 + static_cast<std::size_t>(meta.below(11));   // 2..12
        std::size_t m = static_cast<std::size_t>(meta.below(3));        // 0..2
        std::size_t span = 1 + static_cast<std::size_t>(meta.below(8)); // 1..8
        InstanceSpec spec = gen_random(n, m, span, seed);
        auto state = to_state<Rational>(spec);

        RunOptions opts;
        opts.max_steps = steps;
        opts.trajectory = false;
        opts.monitors = true;

        PassiveController<Rational> passive;
        RandomController<Rational> random(seed ^ 0x9e3779b97f4a7c15ull);
        Controller<Rational>* drivers[2] = {&passive, &random};
        for (auto* driver : drivers) {
            auto rec = run(state, *driver, opts);
            ++run_count;
            for (const auto& mon : rec.monitors)
                if (!mon.pass)
                    rep.fail("seed " + std::to_string(seed) + " under " + driver->name() +
                             ": " + mon.name + " violated at step " +
                             std::to_string(mon.first_violation) + " (" + mon.detail + ")");
        }
    }
    rep.data["instances"] = instances;
    rep.data["runs"] = run_count;
    if (rep.pass) rep.detail = "zero monitor violations";
    return rep;
}

// --- mass placement ---------------------------------------------------------------

inline CheckReport verify_mass(std::size_t instances = 100,
                               std::uint64_t base_seed = 20260401) {
    CheckReport rep{"mass"};
    const Rational one(1);
    for (std::size_t i = 0; i < instances && rep.pass; ++i) {
        std::uint64_t seed = base_seed + i;
        Rng meta(seed);
        std::size_t n = 1 + static_cast<std::size_t>(meta.below(40));  // 1..40
        std::size_t span = static_cast<std::size_t>(meta.below(13));   // 0..12
        InstanceSpec spec = gen_random(n, 9 * n, span, seed);
        auto state = to_state<Rational>(spec);
        MassController<Rational> ctrl;
        RunOptions opts;
        opts.max_steps = 4;
        opts.trajectory = true;
        auto rec = run(state, ctrl, opts);
        if (!rec.convergence_time || *rec.convergence_time > 2) {
            rep.fail("seed " + std::to_string(seed) + ": not converged by t=2");
            continue;
        }
        if (rec.trajectory.size() >= 2) {
            for (const auto& c : components(rec.trajectory[1]))
                if (c.width > one)
                    rep.fail("seed " + std::to_string(seed) +
                             ": t=1 influence graph is not a union of complete graphs");
        }
    }
    rep.data["instances"] = instances;
    if (rep.pass) rep.detail = "all runs converged by t=2 with clique influence at t=1";
    return rep;
}

// --- three-cluster robustness --------------------------------------------------------

inline CheckReport verify_three_cluster(std::size_t runs = 200,
                                        std::uint64_t base_seed = 20260501) {
    CheckReport rep{"three-cluster"};
    for (std::size_t k : {std::size_t{15}, std::size_t{24}}) {
        const long kl = static_cast<long>(k);
        const long horizon = kl / 8;
        const std::size_t i1 = 0, i2 = k * k, i3 = 2 * k * k + k - 1;
        const Rational third2 = Rational(2, 3);
        const Rational cap = Rational(1) - Rational(1, kl);
        for (std::size_t r = 0; r < runs && rep.pass; ++r) {
            std::uint64_t seed = base_seed + 1000 * k + r;
            auto state = to_state<Rational>(gen_three_cluster(k));
            RandomController<Rational> ctrl(seed);
            for (long t = 0; t <= horizon && rep.pass; ++t) {
                const Rational tk = Rational(t, kl);
                const Rational tk2 = tk + Rational(t * t) / Rational(kl * kl);
                const Rational& x1 = state.nonstrategic[i1];
                const Rational& x2 = state.nonstrategic[i2];
                const Rational& x3 = state.nonstrategic[i3];
                bool ok = (-third2 - tk <= x1 && x1 <= -third2 + tk) &&
                          (third2 - tk <= x3 && x3 <= third2 + tk) &&
                          (-tk2 <= x2 && x2 <= tk2) &&
                          (x2 - x1 <= cap) && (x3 - x2 <= cap) && (x3 - x1 > 1);
                if (!ok)
                    rep.fail("k=" + std::to_string(k) + " seed " + std::to_string(seed) +
                             ": inequality broke at t=" + std::to_string(t));
                if (t < horizon) state = hk_step(state, ctrl.step(state));
            }
        }
    }
    rep.data["runs_per_k"] = runs;
    if (rep.pass) rep.detail = "all six inequalities held through floor(k/8)";
    return rep;
}

// --- not-too-fast lower bound ---------------------------------------------------------

inline CheckReport verify_not_too_fast(std::size_t random_directives = 1000,
                                       std::uint64_t base_seed = 20260601) {
    CheckReport rep{"not-too-fast"};
    InstanceSpec spec = gen_not_too_fast(5);
    long nodes = 0;
    for (std::size_t m : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
        spec.m = m;
        auto state = to_state<Rational>(spec);
        SearchOptions opts;
        opts.horizon = 1;
        opts.node_cap = 1000000;
        auto outcome = bounded_search(state, opts);
        nodes += outcome.nodes;
        if (outcome.converge_steps)
            rep.fail("m=" + std::to_string(m) + ": a directive converges at t=1");
    }
    rep.data["search_nodes"] = nodes;

    spec.m = 3;
    auto state = to_state<Rational>(spec);
    const Rational span_cap = Rational(10, 3);
    for (std::size_t j = 0; j < random_directives && rep.pass; ++j) {
        RandomController<Rational> ctrl(base_seed + j);
        auto next = hk_step(state, ctrl.step(state));
        const auto& xs = next.nonstrategic;
        std::size_t distinct = opinion_runs(xs).size();
        bool ok = distinct == 5 && xs.back() - xs.front() <= span_cap && !has_converged(next);
        if (!ok)
            rep.fail("random directive " + std::to_string(j) +
                     ": pigeonhole premise failed at t=1");
    }
    rep.data["random_directives"] = random_directives;
    if (rep.pass) rep.detail = "no directive reaches convergence at t=1";
    return rep;
}

// --- hybrid splits ------------------------------------------------------------------

inline CheckReport verify_hybrid_splits() {
    CheckReport rep{"hybrid-splits"};

    // exact part: first directive on the unit chain n=60 at alpha=1
    InstanceSpec spec = gen_equidistant(60);
    spec.m = 72;  // ceil(60^1) + 12
    auto state = to_state<Rational>(spec);
    HybridController<Rational> ctrl(Rational(1));
    auto d0 = ctrl.step(state);
    std::map<std::string, std::size_t> placed;
    std::size_t far = 0;
    for (const auto& p : d0.positions) {
        if (p) ++placed[format_rational(*p)];
        else ++far;
    }
    std::map<std::string, std::size_t> want{{"0", 15}, {"3", 15}, {"7", 15}, {"10", 15}};
    if (placed != want || far != 12)
        rep.fail("t=0 directive is not 15 agents at each of 0, 3, 7, 10");

    auto splits = ctrl.last_split_pairs();
    if (splits.empty()) rep.fail("no split pairs recorded at t=0");
    auto next = hk_step(state, d0);
    for (const auto& [a, b] : splits)
        if (!(next.nonstrategic[b] - next.nonstrategic[a] > 1))
            rep.fail("split pair (" + std::to_string(a) + ", " + std::to_string(b) +
                     ") not separated after one step");
    rep.data["split_pairs"] = splits.size();

    // smoke part: hybrid converges no slower than passive at small scale
    struct SmokeCase {
        std::string label;
        InstanceSpec spec;
    };
    std::vector<SmokeCase> cases;
    cases.push_back({"equidistant n=60", gen_equidistant(60)});
    cases.push_back({"equidistant n=240", gen_equidistant(240)});
    cases.push_back({"dumbbell farm n=341", gen_dumbbell_farm_fixed(341, 10)});
    auto smoke = nlohmann::ordered_json::array();
    for (const auto& sc : cases) {
        for (const Rational& alpha : {Rational(1, 2), Rational(1)}) {
            InstanceSpec s = sc.spec;
            s.m = (ceil_power(BigInt(s.n), numerator(alpha), denominator(alpha)) + 12)
                      .convert_to<std::size_t>();
            RunOptions opts;
            opts.trajectory = false;
            auto hy_state = to_state<double>(s);
            HybridController<double> hy(alpha);
            auto hy_rec = run(hy_state, hy, opts);
            auto pa_rec = run_passive(hy_state, opts);
            long th = hy_rec.convergence_time.value_or(-1);
            long tp = pa_rec.convergence_time.value_or(-1);
            nlohmann::ordered_json row;
            row["case"] = sc.label;
            row["alpha"] = format_rational(alpha);
            row["hybrid_time"] = th;
            row["passive_time"] = tp;
            smoke.push_back(std::move(row));
            if (th < 0)
                rep.fail(sc.label + " alpha=" + format_rational(alpha) +
                         ": hybrid did not converge");
            else if (tp >= 0 && th > tp)
                rep.fail(sc.label + " alpha=" + format_rational(alpha) +
                         ": hybrid slower than passive (" + std::to_string(th) + " > " +
                         std::to_string(tp) + ")");
        }
    }
    rep.data["smoke"] = std::move(smoke);
    if (rep.pass) rep.detail = "exact first directive, separated splits, smoke runs in order";
    return rep;
}

// --- contraction per-step contract (acceptance helper) --------------------------------

inline CheckReport verify_contraction_contract(std::size_t instances = 200,
                                               std::uint64_t base_seed = 20260701) {
    CheckReport rep{"contraction"};
    std::size_t produced = 0;
    std::uint64_t probe = base_seed;
    long longest = 0;
    while (produced < instances && rep.pass) {
        std::uint64_t seed = probe++;
        Rng meta(seed);
        std::size_t n = 2 + static_cast<std::size_t>(meta.below(29));   // 2..30
        std::size_t span = 1 + static_cast<std::size_t>(meta.below(8)); // 1..8
        InstanceSpec spec = gen_random(n, 1, span, seed);
        auto state = to_state<Rational>(spec);
        if (has_converged(state)) continue;  // the contract concerns non-converged starts
        ++produced;

        const long bound = static_cast<long>(n) * static_cast<long>(n) +
                           (static_cast<long>(n) - 1) * (static_cast<long>(n) + 1);
        const Rational min_drop = Rational(1, static_cast<long>(n) + 1);
        ContractionController<Rational> ctrl;
        long t = 0;
        while (!has_converged(state)) {
            if (t > bound) {
                rep.fail("seed " + std::to_string(seed) + ": exceeded the step bound " +
                         std::to_string(bound));
                break;
            }
            auto d = ctrl.step(state);
            auto next = hk_step(state, d);
            Rational w_prev = total_width(state);
            Rational w_next = total_width(next);
            bool case2 = w_prev - w_next >= min_drop;
            bool case1 = false;
            if (w_next <= w_prev) {
                auto rp = opinion_runs(state.nonstrategic);
                auto rn = opinion_runs(next.nonstrategic);
                std::size_t jn = 0;
                for (const auto& r : rp) {
                    while (rn[jn].end <= r.begin) ++jn;
                    if (rn[jn].count() > r.count()) {
                        case1 = true;
                        break;
                    }
                }
            }
            if (!case1 && !case2) {
                rep.fail("seed " + std::to_string(seed) + " step " + std::to_string(t) +
                         ": neither weight gain nor width drop of 1/(n+1)");
                break;
            }
            state = std::move(next);
            ++t;
        }
        longest = std::max(longest, t);
    }
    rep.data["instances"] = produced;
    rep.data["longest_run"] = longest;
    if (rep.pass) rep.detail = "every step satisfied the improvement contract";
    return rep;
}

// --- farm influence lower bound (acceptance helper) -----------------------------------

inline CheckReport verify_farm_witness(std::size_t runs = 20, std::size_t n = 40000,
                                       std::uint64_t base_seed = 20260801) {
    CheckReport rep{"farm-witness"};
    InstanceSpec spec = gen_dumbbell_farm(n, Rational(0));
    spec.m = integer_root(BigInt(n), 4).convert_to<std::size_t>();
    auto initial = to_state<double>(spec);
    long max_witness = 0;
    std::size_t never_total = 0;
    for (std::size_t r = 0; r < runs && rep.pass; ++r) {
        std::uint64_t seed = base_seed + r;
        RandomController<double> ctrl(seed);
        RunOptions opts;
        opts.trajectory = false;
        auto rec = run(initial, ctrl, opts);
        auto witness = influence_check(rec, initial, opts);
        for (long s : witness.standalone)
            if (s >= 0) ++never_total;
        max_witness = std::max(max_witness, witness.witness);
        if (!witness.pass)
            rep.fail("seed " + std::to_string(seed) + ": convergence time " +
                     std::to_string(rec.convergence_time.value_or(-1)) +
                     " fell below the witness " + std::to_string(witness.witness));
    }
    rep.data["runs"] = runs;
    rep.data["never_influenced_components"] = never_total;
    rep.data["max_witness"] = max_witness;
    if (rep.pass) rep.detail = "witness bound held on every run";
    return rep;
}

// --- selector dispatch -----------------------------------------------------------------

inline std::vector<CheckReport> run_verify(const std::string& selector,
                                           std::size_t invariant_seeds = 500) {
    std::vector<CheckReport> out;
    auto want = [&](const char* name) { return selector == "all" || selector == name; };
    if (want("invariants")) out.push_back(verify_invariants(invariant_seeds));
    if (want("golden")) out.push_back(verify_golden());
    if (want("mass")) out.push_back(verify_mass());
    if (want("three-cluster")) out.push_back(verify_three_cluster());
    if (want("not-too-fast")) out.push_back(verify_not_too_fast());
    if (want("hybrid-splits")) out.push_back(verify_hybrid_splits());
    if (out.empty())
        throw Error(ErrorCode::InvalidParam, "unknown verify selector: " + selector);
    return out;
}

inline nlohmann::ordered_json reports_to_json(const std::vector<CheckReport>& reps) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reps) {
        nlohmann::ordered_json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        j["data"] = r.data;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace hk
