#pragma once

#include "hk/controllers.hpp"
#include "hk/instances.hpp"

#include <array>
#include <limits>
#include <ostream>
#include <utility>

namespace hk {

enum class MonitorPolicy { Record, Abort };

struct RunOptions {
    long max_steps = 1000000;
    std::optional<bool> trajectory;  // default: record iff n <= 10000
    bool monitors = false;
    MonitorPolicy monitor_policy = MonitorPolicy::Record;
    int bit_budget = kDefaultBitBudget;
};

struct MonitorResult {
    std::string name;
    bool pass = true;
    long first_violation = -1;  // step index t of the offending transition
    std::string detail;
};

// Influence bookkeeping for one component of the starting configuration;
// first_influenced = -1 means no strategic agent ever entered any member's
// neighborhood ("never").
struct InfluenceEntry {
    std::size_t begin = 0;
    std::size_t end = 0;
    long first_influenced = -1;
};

template <class S>
struct RunRecord {
    std::optional<long> convergence_time;  // empty: not converged within max_steps
    long steps_executed = 0;
    std::vector<OpinionState<S>> trajectory;  // states t = 0..steps when recorded
    std::vector<MonitorResult> monitors;      // fixed order, empty when monitors off
    std::vector<InfluenceEntry> influence;    // per initial component
};

namespace detail {

inline constexpr std::array<const char*, 7> kMonitorNames = {
    "ORDER",        "BOUNDED_MOVE",     "WEIGHT_MONOTONE",        "COINCIDENCE",
    "EQUALITY_PERSISTENCE", "HULL_CONTAINMENT", "SEPARATION_PERSISTENCE"};

// Rounding grace for float runs, scale-aware; exact runs get none.
template <class S>
S monitor_slack(const S& scale) {
    if constexpr (scalar_traits<S>::mode == NumericMode::Rational) {
        (void)scale;
        return Rational(0);
    } else {
        return kFloatSeparationSlack * std::max(1.0, std::abs(scale));
    }
}

template <class S>
class MonitorSet {
public:
    MonitorSet() {
        for (const char* n : kMonitorNames) results_.push_back({n, true, -1, ""});
    }

    void check(const OpinionState<S>& prev, const ControlDirective<S>& d,
               const OpinionState<S>& next, MonitorPolicy policy) {
        const auto& xp = prev.nonstrategic;
        const auto& xn = next.nonstrategic;
        const std::size_t n = xp.size();
        const S one = scalar_traits<S>::from_int(1);
        const long t = prev.t;

        if (!weakly_sorted(xn)) flag(0, t, "order broken", policy);

        for (std::size_t i = 0; i < n; ++i)
            if (abs_val(xn[i] - xp[i]) > one + monitor_slack(xp[i])) {
                flag(1, t, "agent " + std::to_string(i) + " moved more than 1", policy);
                break;
            }

        check_weights(prev, next, policy);
        check_coincidence(prev, d, next, policy);

        for (std::size_t i = 0; i + 1 < n; ++i)
            if (xp[i] == xp[i + 1] && !(xn[i] == xn[i + 1])) {
                flag(4, t, "equal pair " + std::to_string(i) + " split", policy);
                break;
            }

        check_hull(prev, d, next, policy);

        if (d.all_far_p()) {
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (xp[i + 1] - xp[i] > one && !(xn[i + 1] - xn[i] > one)) {
                    flag(6, t, "separated pair " + std::to_string(i) + " merged", policy);
                    break;
                }
        }
    }

    std::vector<MonitorResult> take() && { return std::move(results_); }

private:
    void check_weights(const OpinionState<S>& prev, const OpinionState<S>& next,
                       MonitorPolicy policy) {
        auto rp = opinion_runs(prev.nonstrategic);
        auto rn = opinion_runs(next.nonstrategic);
        // both run lists partition the same index range in order
        std::size_t jp = 0;
        for (const auto& r : rn) {
            while (rp[jp].end <= r.begin) ++jp;
            for (std::size_t j = jp; j < rp.size() && rp[j].begin < r.end; ++j)
                if (r.count() < rp[j].count()) {
                    flag(2, prev.t, "weight shrank at agent " + std::to_string(rp[j].begin),
                         policy);
                    return;
                }
        }
    }

    void check_coincidence(const OpinionState<S>& prev, const ControlDirective<S>& d,
                           const OpinionState<S>& next, MonitorPolicy policy) {
        auto nb = neighborhoods(prev, d);
        const auto& xn = next.nonstrategic;
        for (std::size_t i = 0; i + 1 < xn.size(); ++i) {
            bool same = nb[i].same_members(nb[i + 1]);
            bool eq = xn[i] == xn[i + 1];
            if (same != eq) {
                flag(3, prev.t,
                     std::string(same ? "same neighborhoods, distinct means"
                                      : "equal means, distinct neighborhoods") +
                         " at pair " + std::to_string(i),
                     policy);
                return;
            }
        }
    }

    void check_hull(const OpinionState<S>& prev, const ControlDirective<S>& d,
                    const OpinionState<S>& next, MonitorPolicy policy) {
        const auto& xp = prev.nonstrategic;
        const auto& xn = next.nonstrategic;
        const S one = scalar_traits<S>::from_int(1);
        std::vector<S> engaged;
        for (const auto& [v, j] : engaged_strategic(d)) engaged.push_back(v);
        for (const auto& c : components(prev)) {
            const S& lo = xp[c.begin];
            const S& hi = xp[c.end - 1];
            // outside agents within reach of a member sit in the two edge bands
            auto in_left = std::lower_bound(engaged.begin(), engaged.end(), lo) -
                           std::lower_bound(engaged.begin(), engaged.end(), lo - one);
            auto in_right = std::upper_bound(engaged.begin(), engaged.end(), hi + one) -
                            std::upper_bound(engaged.begin(), engaged.end(), hi);
            if (in_left != 0 || in_right != 0) continue;  // condition not met; skip
            S tol = monitor_slack(abs_val(lo) < abs_val(hi) ? hi : lo);
            for (std::size_t i = c.begin; i < c.end; ++i)
                if (xn[i] < lo - tol || xn[i] > hi + tol) {
                    flag(5, prev.t, "component hull grew at agent " + std::to_string(i),
                         policy);
                    return;
                }
        }
    }

    void flag(std::size_t idx, long t, const std::string& detail, MonitorPolicy policy) {
        if (results_[idx].pass) {
            results_[idx].pass = false;
            results_[idx].first_violation = t;
            results_[idx].detail = detail;
        }
        if (policy == MonitorPolicy::Abort)
            throw Error(ErrorCode::MonitorViolation,
                        results_[idx].name + " at step " + std::to_string(t) + ": " + detail);
    }

    std::vector<MonitorResult> results_;
};

// Record, against the starting components, the first step at which an engaged
// strategic position reaches any member's neighborhood.
template <class S>
void mark_influence(std::vector<InfluenceEntry>& log, const OpinionState<S>& state,
                    const ControlDirective<S>& d) {
    const auto& xs = state.nonstrategic;
    const S one = scalar_traits<S>::from_int(1);
    for (const auto& p : d.positions) {
        if (!p) continue;
        std::size_t lo = static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), *p - one) - xs.begin());
        std::size_t hi = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), *p + one) - xs.begin());
        if (lo >= hi) continue;
        for (auto& entry : log) {
            if (entry.end <= lo) continue;
            if (entry.begin >= hi) break;
            if (entry.first_influenced < 0) entry.first_influenced = state.t;
        }
    }
}

}  // namespace detail

// Run to convergence (first t with every pair equal-or-separated), at most
// max_steps updates. Controller errors and arithmetic overflow propagate.
template <class S>
RunRecord<S> run(const OpinionState<S>& initial, Controller<S>& controller,
                 const RunOptions& opts = {}) {
    validate(initial);
    if (opts.max_steps < 1)
        throw Error(ErrorCode::InvalidParam, "max_steps must be at least 1");
    const bool record_traj = opts.trajectory.value_or(initial.n() <= 10000);

    RunRecord<S> rec;
    for (const auto& c : components(initial)) rec.influence.push_back({c.begin, c.end, -1});
    detail::MonitorSet<S> monitors;

    OpinionState<S> state = initial;
    if (record_traj) rec.trajectory.push_back(state);
    StepOptions sopts{opts.bit_budget};
    while (true) {
        if (has_converged(state)) {
            rec.convergence_time = state.t;
            break;
        }
        if (rec.steps_executed >= opts.max_steps) break;
        ControlDirective<S> d = controller.step(state);
        if (d.size() != state.m())
            throw Error(ErrorCode::Internal, "controller returned a directive of wrong size");
        detail::mark_influence(rec.influence, state, d);
        OpinionState<S> next = hk_step(state, d, sopts);
        if (opts.monitors) monitors.check(state, d, next, opts.monitor_policy);
        ++rec.steps_executed;
        state = std::move(next);
        if (record_traj) rec.trajectory.push_back(state);
    }
    if (opts.monitors) rec.monitors = std::move(monitors).take();
    return rec;
}

template <class S>
RunRecord<S> run_passive(const OpinionState<S>& initial, const RunOptions& opts = {}) {
    PassiveController<S> passive;
    return run(initial, passive, opts);
}

// Lower-bound check: every never-influenced starting component, re-run alone
// from its original opinions, must converge no later than the full system.
struct InfluenceWitness {
    long witness = 0;              // max standalone time over never-influenced components
    bool pass = true;              // full convergence time >= witness
    std::vector<long> standalone;  // per component; -1 when influenced (not checked)
};

template <class S>
InfluenceWitness influence_check(const RunRecord<S>& rec, const OpinionState<S>& initial,
                                 const RunOptions& opts = {}) {
    InfluenceWitness out;
    auto comps = components(initial);
    if (comps.size() != rec.influence.size())
        throw Error(ErrorCode::InvalidParam, "record does not describe this instance");
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (rec.influence[c].first_influenced >= 0) {
            out.standalone.push_back(-1);
            continue;
        }
        OpinionState<S> sub;
        sub.nonstrategic.assign(initial.nonstrategic.begin() + comps[c].begin,
                                initial.nonstrategic.begin() + comps[c].end);
        RunOptions sub_opts = opts;
        sub_opts.trajectory = false;
        sub_opts.monitors = false;
        auto sub_rec = run_passive(sub, sub_opts);
        long t = sub_rec.convergence_time ? *sub_rec.convergence_time : opts.max_steps + 1;
        out.standalone.push_back(t);
        out.witness = std::max(out.witness, t);
    }
    long full = rec.convergence_time ? *rec.convergence_time
                                     : std::numeric_limits<long>::max();
    out.pass = full >= out.witness;
    return out;
}

// --- serialization -------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json scalar_json(const Rational& q) { return format_rational(q); }
inline nlohmann::ordered_json scalar_json(double x) { return x; }

}  // namespace detail

template <class S>
nlohmann::ordered_json record_to_json(const RunRecord<S>& rec, const InstanceSpec& spec,
                                      const std::string& controller_name,
                                      const RunOptions& opts = {}) {
    nlohmann::ordered_json j;
    j["schema"] = "hk-run/1";
    j["instance"] = instance_to_json(spec);
    j["controller"] = controller_name;
    j["mode"] = to_string(scalar_traits<S>::mode);
    j["max_steps"] = opts.max_steps;
    if (rec.convergence_time) j["convergence_time"] = *rec.convergence_time;
    else j["convergence_time"] = "NOT_CONVERGED";
    j["steps_executed"] = rec.steps_executed;

    auto monitors = nlohmann::ordered_json::array();
    for (const auto& m : rec.monitors) {
        nlohmann::ordered_json mj;
        mj["name"] = m.name;
        mj["pass"] = m.pass;
        if (m.pass) mj["first_violation"] = nullptr;
        else mj["first_violation"] = m.first_violation;
        if (!m.detail.empty()) mj["detail"] = m.detail;
        monitors.push_back(std::move(mj));
    }
    j["monitors"] = std::move(monitors);

    auto influence = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < rec.influence.size(); ++c) {
        const auto& e = rec.influence[c];
        nlohmann::ordered_json ij;
        ij["component"] = c;
        ij["begin"] = e.begin;
        ij["end"] = e.end;
        if (e.first_influenced < 0) ij["first_influenced"] = "NEVER";
        else ij["first_influenced"] = e.first_influenced;
        influence.push_back(std::move(ij));
    }
    j["influence"] = std::move(influence);

    if (!rec.trajectory.empty()) {
        auto traj = nlohmann::ordered_json::array();
        for (const auto& st : rec.trajectory) {
            nlohmann::ordered_json row;
            row["t"] = st.t;
            auto ns = nlohmann::ordered_json::array();
            for (const auto& v : st.nonstrategic) ns.push_back(detail::scalar_json(v));
            row["nonstrategic"] = std::move(ns);
            auto sj = nlohmann::ordered_json::array();
            for (const auto& p : st.strategic)
                sj.push_back(p ? detail::scalar_json(*p) : nlohmann::ordered_json(nullptr));
            row["strategic"] = std::move(sj);
            traj.push_back(std::move(row));
        }
        j["trajectory"] = std::move(traj);
    } else {
        j["trajectory"] = nullptr;
    }
    return j;
}

// One row per agent per recorded step; disengaged strategic agents materialize
// two units beyond the rightmost non-strategic opinion.
template <class S>
void write_trajectory_csv(std::ostream& os, const RunRecord<S>& rec) {
    os << "t,agent_kind,agent_index,opinion\n";
    for (const auto& st : rec.trajectory) {
        for (std::size_t i = 0; i < st.n(); ++i)
            os << st.t << ",N," << i << "," << scalar_traits<S>::format(st.nonstrategic[i])
               << "\n";
        for (std::size_t jdx = 0; jdx < st.m(); ++jdx)
            os << st.t << ",S," << jdx << ","
               << scalar_traits<S>::format(st.strategic_position(jdx)) << "\n";
    }
}

}  // namespace hk
