#pragma once

#include "hk/dynamics.hpp"
#include "hk/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hk {

// A controller chooses the strategic opinions for the next update from the
// current state. Implementations are deterministic given construction
// parameters; per-run memory lives inside the object.
template <class S>
class Controller {
public:
    virtual ~Controller() = default;
    virtual std::string name() const = 0;
    virtual ControlDirective<S> step(const OpinionState<S>& state) = 0;
};

// --- passive -----------------------------------------------------------------

template <class S>
class PassiveController : public Controller<S> {
public:
    std::string name() const override { return "passive"; }
    ControlDirective<S> step(const OpinionState<S>& state) override {
        return ControlDirective<S>::all_far(state.m());
    }
};

// --- contraction -------------------------------------------------------------

// One strategic agent: wait while any component of width in (0, 1] merges by
// itself; otherwise pull the leftmost component of width > 1 together by
// placing at its left edge + 1.
template <class S>
class ContractionController : public Controller<S> {
public:
    std::string name() const override { return "contraction"; }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        if (state.m() != 1)
            throw Error(ErrorCode::WrongM, "contraction uses exactly one strategic agent");
        auto far = ControlDirective<S>::all_far(1);
        if (has_converged(state)) return far;
        const S one = scalar_traits<S>::from_int(1);
        auto comps = components(state);
        for (const auto& c : comps)
            if (c.width > scalar_traits<S>::from_int(0) && !(c.width > one)) return far;
        for (const auto& c : comps)
            if (c.width > one) {
                ControlDirective<S> d = far;
                d.positions[0] = state.nonstrategic[c.begin] + one;
                return d;
            }
        return far;
    }
};

// --- cutter ------------------------------------------------------------------

// Detach groups of k = floor(n^(1/4)) agents from alternating ends of a
// tracked chain, one cut per step; below n = 81 the construction has no
// headroom and the controller stays passive.
template <class S>
class CutterController : public Controller<S> {
public:
    CutterController() = default;
    CutterController(std::size_t range_begin, std::size_t range_end)
        : fixed_range_(std::make_pair(range_begin, range_end)) {}

    std::string name() const override { return "cutter"; }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        if (state.m() < 1)
            throw Error(ErrorCode::WrongM, "cutter needs at least one strategic agent");
        auto far = ControlDirective<S>::all_far(state.m());
        if (!initialized_) {
            fallback_ = state.n() < 81;
            k_ = static_cast<std::size_t>(
                integer_root(BigInt(state.n()), 4).convert_to<unsigned long>());
            lo_ = fixed_range_ ? fixed_range_->first : 0;
            hi_ = fixed_range_ ? fixed_range_->second : state.n() - 1;
            if (hi_ >= state.n() || lo_ > hi_)
                throw Error(ErrorCode::InvalidParam, "cutter range outside the state");
            initialized_ = true;
        }
        if (fallback_ || done_) return far;
        if (hi_ - lo_ + 1 <= k_) {
            done_ = true;
            return far;
        }
        bool any_big = false;
        for (const auto& c : components(state))
            if (c.end > lo_ && c.begin <= hi_ && c.size() > k_) any_big = true;
        if (!any_big) {
            done_ = true;
            return far;
        }
        const S one = scalar_traits<S>::from_int(1);
        ControlDirective<S> d = far;
        if (cut_left_) {
            d.positions[0] = state.nonstrategic[lo_ + k_ - 1] - one;
            lo_ += k_;
        } else {
            d.positions[0] = state.nonstrategic[hi_ - (k_ - 1)] + one;
            hi_ -= k_;
        }
        cut_left_ = !cut_left_;
        return d;
    }

    std::size_t cut_size() const { return k_; }

private:
    std::optional<std::pair<std::size_t, std::size_t>> fixed_range_;
    bool initialized_ = false, fallback_ = false, done_ = false, cut_left_ = true;
    std::size_t k_ = 0, lo_ = 0, hi_ = 0;
};

// --- dumbbell two-shot ---------------------------------------------------------

// For the dumbbell chain: place at 2, then at k-2; afterwards hand the middle
// chain (agents k+5 .. 2k-3, one-based) to the cutter.
template <class S>
class DumbbellController : public Controller<S> {
public:
    explicit DumbbellController(std::optional<std::size_t> k = std::nullopt) : k_param_(k) {}

    std::string name() const override { return "dumbbell"; }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        if (!initialized_) {
            std::size_t n = state.n();
            k_ = k_param_ ? *k_param_ : (n - 1) / 3;
            if (k_ < 10 || n != 3 * k_ + 1)
                throw Error(ErrorCode::InvalidParam,
                            "dumbbell controller needs a dumbbell state (n = 3k+1, k >= 10)");
            if (state.m() < 1)
                throw Error(ErrorCode::WrongM, "dumbbell uses one strategic agent");
            initialized_ = true;
        }
        auto far = ControlDirective<S>::all_far(state.m());
        if (state.t == 0) {
            far.positions[0] = scalar_traits<S>::from_int(2);
            return far;
        }
        if (state.t == 1) {
            far.positions[0] = scalar_traits<S>::from_int(static_cast<long>(k_) - 2);
            return far;
        }
        if (!cutter_)
            cutter_ = std::make_unique<CutterController<S>>(k_ + 4, 2 * k_ - 4);
        return cutter_->step(state);
    }

private:
    std::optional<std::size_t> k_param_;
    bool initialized_ = false;
    std::size_t k_ = 0;
    std::unique_ptr<CutterController<S>> cutter_;
};

// --- single-shot mass placement ------------------------------------------------

template <class S>
struct MassPlacement {
    S position;
    std::size_t count = 0;  // 3 * (a + b + c)
};

template <class S>
struct MassComponentPlan {
    std::size_t begin = 0, end = 0;  // component's agent range
    std::size_t w_ceil = 0;          // ceil(width)
    std::size_t k = 0;               // number of placement positions
    S epsilon{};                     // spacing surplus (meaningful for k >= 2)
    S center{};                      // interval midpoint (recorded when k == 0)
    std::vector<MassPlacement<S>> placements;
};

namespace detail {

inline std::size_t ceil_width(const Rational& w) {
    BigInt num = numerator(w), den = denominator(w);
    BigInt c = (num + den - 1) / den;
    return c.convert_to<std::size_t>();
}

inline std::size_t ceil_width(double w) { return static_cast<std::size_t>(std::ceil(w)); }

}  // namespace detail

// Positions p_j = x_l + (1 if ceil(w) even else 0) + (2 + eps) * j spaced so
// that every agent of the component hears exactly one position; each position
// gets 3*(a+b+c) strategic agents where b counts agents within 1 and a, c the
// agents up to one unit further out on each side.
template <class S>
std::vector<MassComponentPlan<S>> plan_mass_placement(const OpinionState<S>& state) {
    const auto& xs = state.nonstrategic;
    const S one = scalar_traits<S>::from_int(1);
    const S two = scalar_traits<S>::from_int(2);
    std::vector<MassComponentPlan<S>> plans;
    for (const auto& comp : components(state)) {
        MassComponentPlan<S> plan;
        plan.begin = comp.begin;
        plan.end = comp.end;
        plan.w_ceil = detail::ceil_width(comp.width);
        const S& xl = xs[comp.begin];
        const S& xr = xs[comp.end - 1];
        if (plan.w_ceil <= 1) {
            plan.k = 0;
            plan.center = (xl + xr) / two;
            plans.push_back(std::move(plan));
            continue;
        }
        bool even = plan.w_ceil % 2 == 0;
        plan.k = even ? plan.w_ceil / 2 : (plan.w_ceil + 1) / 2;
        S base = even ? xl + one : xl;

        auto positions_for = [&](const S& eps) {
            std::vector<S> ps;
            S step = two + eps;
            S p = base;
            for (std::size_t j = 0; j < plan.k; ++j, p += step) ps.push_back(p);
            return ps;
        };
        auto admissible = [&](const std::vector<S>& ps) {
            if (ps.back() > xr) return false;
            for (std::size_t j = 0; j + 1 < ps.size(); ++j) {
                // the open interval (p_j + 1, p_{j+1} - 1) must hold no opinion
                auto it = std::upper_bound(xs.begin(), xs.end(), ps[j] + one);
                if (it != xs.end() && *it < ps[j + 1] - one) return false;
            }
            return true;
        };

        S eps = one / scalar_traits<S>::from_int(2 * static_cast<long>(plan.k));
        std::vector<S> ps = positions_for(eps);
        if (plan.k >= 2) {
            int halvings = 0;
            while (!admissible(ps)) {
                if (++halvings > 64)
                    throw Error(ErrorCode::EpsilonFailure,
                                "no admissible spacing after 64 halvings");
                eps /= two;
                ps = positions_for(eps);
            }
        }
        plan.epsilon = eps;

        for (const auto& p : ps) {
            auto count_between = [&](auto first, auto last) {
                return static_cast<std::size_t>(last - first);
            };
            std::size_t b = count_between(std::lower_bound(xs.begin(), xs.end(), p - one),
                                          std::upper_bound(xs.begin(), xs.end(), p + one));
            std::size_t a = count_between(std::lower_bound(xs.begin(), xs.end(), p - two),
                                          std::lower_bound(xs.begin(), xs.end(), p - one));
            std::size_t c = count_between(std::upper_bound(xs.begin(), xs.end(), p + one),
                                          std::upper_bound(xs.begin(), xs.end(), p + two));
            plan.placements.push_back({p, 3 * (a + b + c)});
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

template <class S>
class MassController : public Controller<S> {
public:
    std::string name() const override { return "mass"; }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        auto d = ControlDirective<S>::all_far(state.m());
        if (fired_) return d;
        if (state.m() < 9 * state.n())
            throw Error(ErrorCode::InsufficientM, "mass placement needs m >= 9n");
        fired_ = true;
        plan_ = plan_mass_placement(state);
        std::size_t total = 0;
        for (const auto& cp : plan_)
            for (const auto& pl : cp.placements) total += pl.count;
        if (total > state.m())
            throw Error(ErrorCode::Internal, "mass plan exceeds the strategic budget");
        std::size_t slot = 0;
        for (const auto& cp : plan_)
            for (const auto& pl : cp.placements)
                for (std::size_t i = 0; i < pl.count; ++i) d.positions[slot++] = pl.position;
        return d;
    }

    const std::vector<MassComponentPlan<S>>& plan() const { return plan_; }

private:
    bool fired_ = false;
    std::vector<MassComponentPlan<S>> plan_;
};

// --- hybrid split/compress ------------------------------------------------------

// Phase 1 walks the components splitting sparse stretches pairwise (6k agents
// per split, budget n^alpha + 12 per step) and marking dense windows; phase 2
// repeatedly compresses the marked/dense component family; phase 3 compresses
// every remaining component of width > 1. Threshold comparisons against
// n^alpha are evaluated exactly in integers.
template <class S>
class HybridController : public Controller<S> {
public:
    explicit HybridController(const Rational& alpha) : alpha_(alpha) {
        if (alpha_ <= 0 || alpha_ > 1)
            throw Error(ErrorCode::InvalidParam, "hybrid needs alpha in (0, 1]");
        ap_ = numerator(alpha_);
        aq_ = denominator(alpha_);
    }

    std::string name() const override { return "hybrid"; }

    int phase() const { return phase_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& last_split_pairs() const {
        return last_splits_;
    }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        const auto& xs = state.nonstrategic;
        if (!initialized_) {
            n_ = state.n();
            std::size_t expect =
                (ceil_power(BigInt(n_), ap_, aq_) + 12).convert_to<std::size_t>();
            if (state.m() != expect)
                throw Error(ErrorCode::WrongM,
                            "hybrid needs m = ceil(n^alpha) + 12 = " + std::to_string(expect));
            marked_.assign(n_, false);
            initialized_ = true;
        }
        auto d = ControlDirective<S>::all_far(state.m());
        last_splits_.clear();
        if (done_) return d;
        const S one = scalar_traits<S>::from_int(1);
        const S three = scalar_traits<S>::from_int(3);
        const S four = scalar_traits<S>::from_int(4);
        auto comps = components(state);
        auto comp_at = [&](std::size_t i) -> const Component<S>& {
            for (const auto& c : comps)
                if (i >= c.begin && i < c.end) return c;
            throw Error(ErrorCode::Internal, "agent outside every component");
        };

        if (phase_ == 1) {
            std::size_t slot = 0;
            long used = 0;
            while (h_ < n_) {
                const auto& C = comp_at(h_);
                const S& xr = xs[C.end - 1];
                if (xs[h_] + four >= xr) {  // not enough runway in this component
                    h_ = C.end;
                    continue;
                }
                auto win_lo = std::lower_bound(xs.begin(), xs.end(), xs[h_]);
                auto win_hi = std::upper_bound(xs.begin(), xs.end(), xs[h_] + four);
                std::size_t census = static_cast<std::size_t>(win_hi - win_lo);
                if (dense_window(census)) {
                    marked_[h_] = true;
                    if (h_ + 1 < n_ && xs[h_ + 1] + four <= xr) {
                        ++h_;
                        continue;
                    }
                    h_ = C.end;
                    continue;
                }
                auto [a, b] = split_pair(xs, h_, C);
                long six_k = 6 * static_cast<long>(census);
                long t_budget = used + six_k - 12;
                if (t_budget > 0 && exceeds_power(Rational(t_budget), BigInt(n_), ap_, aq_))
                    return d;  // budget spent; resume here next step
                if (slot + static_cast<std::size_t>(six_k) > d.positions.size())
                    throw Error(ErrorCode::Internal, "hybrid split exceeded directive slots");
                for (long i = 0; i < six_k / 2; ++i) d.positions[slot++] = xs[a] - one;
                for (long i = 0; i < six_k / 2; ++i) d.positions[slot++] = xs[b] + one;
                last_splits_.emplace_back(a, b);
                used += six_k;
                if (xs[b] + four >= xr) {
                    h_ = C.end;
                    continue;
                }
                h_ = static_cast<std::size_t>(
                    std::upper_bound(xs.begin(), xs.end(), xs[b] + four) - xs.begin());
            }
            phase_ = 2;  // family selection happens one step later
            return d;
        }

        if (phase_ == 2) {
            if (!family_computed_) {
                in_family_.assign(n_, false);
                for (const auto& c : comps) {
                    bool any_marked = false;
                    for (std::size_t i = c.begin; i < c.end; ++i)
                        if (marked_[i]) any_marked = true;
                    if (any_marked || dense_component(c))
                        for (std::size_t i = c.begin; i < c.end; ++i) in_family_[i] = true;
                }
                family_computed_ = true;
            }
            for (const auto& c : comps)
                if (in_family_[c.begin] && c.width > one) {
                    for (auto& p : d.positions) p = xs[c.begin] + one;
                    return d;
                }
            phase_ = 3;  // the remaining sweep starts next step
            return d;
        }

        // phase 3: compress every component of width > 1, left to right, as
        // budget allows; components at width <= 1 freeze by themselves.
        std::size_t slot = 0;
        bool any_wide = false;
        for (const auto& c : comps) {
            if (!(c.width > one)) continue;
            any_wide = true;
            if (c.size() > d.positions.size())
                throw Error(ErrorCode::Internal,
                            "component too large for the strategic budget");
            if (slot + c.size() > d.positions.size()) break;
            for (std::size_t i = 0; i < c.size(); ++i) d.positions[slot++] = xs[c.begin] + one;
        }
        if (!any_wide) done_ = true;
        return d;
    }

private:
    bool dense_window(std::size_t census) const {
        long lhs = 12 * static_cast<long>(census) - 12;
        return lhs > 0 && exceeds_power(Rational(lhs), BigInt(n_), ap_, aq_);
    }

    bool dense_component(const Component<S>& c) const {
        if (!(c.width > scalar_traits<S>::from_int(0))) return true;  // point clusters
        if constexpr (scalar_traits<S>::mode == NumericMode::Rational) {
            Rational ratio = Rational(144 * static_cast<long>(c.size())) / c.width;
            // ratio >= n^alpha  <=>  not (ratio < n^alpha)
            BigInt lhs = pow(numerator(ratio), static_cast<unsigned>(aq_));
            BigInt rhs = pow(BigInt(n_), static_cast<unsigned>(ap_)) *
                         pow(denominator(ratio), static_cast<unsigned>(aq_));
            return lhs >= rhs;
        } else {
            double na = std::pow(static_cast<double>(n_),
                                 ap_.convert_to<double>() / aq_.convert_to<double>());
            return 144.0 * static_cast<double>(c.size()) >= na * c.width;
        }
    }

    // Consecutive distinct values v < v' with both in [x_h + 1, x_h + 3];
    // widest gap wins, ties to the left; a is the last agent at v, b the
    // first at v'.
    std::pair<std::size_t, std::size_t> split_pair(const std::vector<S>& xs, std::size_t h,
                                                   const Component<S>& C) const {
        const S wlo = xs[h] + scalar_traits<S>::from_int(1);
        const S whi = xs[h] + scalar_traits<S>::from_int(3);
        std::optional<std::pair<std::size_t, std::size_t>> best;
        S best_gap{};
        std::size_t i = C.begin;
        while (i < C.end) {
            std::size_t j = i;
            while (j < C.end && xs[j] == xs[i]) ++j;
            if (j < C.end && xs[i] >= wlo && xs[j] <= whi) {
                S gap = xs[j] - xs[i];
                if (!best || gap > best_gap) {
                    best = std::make_pair(j - 1, j);
                    best_gap = gap;
                }
            }
            i = j;
        }
        if (!best)
            throw Error(ErrorCode::Internal, "no split pair inside the census window");
        return *best;
    }

    Rational alpha_;
    BigInt ap_, aq_;
    bool initialized_ = false, family_computed_ = false, done_ = false;
    int phase_ = 1;
    std::size_t n_ = 0, h_ = 0;
    std::vector<bool> marked_, in_family_;
    std::vector<std::pair<std::size_t, std::size_t>> last_splits_;
};

// --- bounded exhaustive search ---------------------------------------------------

struct SearchOptions {
    int horizon = 1;
    long node_cap = 500000;
    std::size_t max_n = 8;
    std::size_t max_m = 3;
    int max_horizon = 4;
};

template <class S>
struct SearchOutcome {
    ControlDirective<S> first;
    std::optional<int> converge_steps;  // best steps-to-converge within horizon
    long nodes = 0;
};

namespace detail {

template <class S>
struct SearchScore {
    int steps;  // horizon + 1 when no branch converged
    S width;

    bool better_than(const SearchScore& o) const {
        if (steps != o.steps) return steps < o.steps;
        return width < o.width;
    }
};

template <class S>
std::vector<std::optional<S>> search_candidates(const OpinionState<S>& state) {
    const S one = scalar_traits<S>::from_int(1);
    std::vector<S> vals;
    for (const auto& r : opinion_runs(state.nonstrategic)) {
        const S& v = state.nonstrategic[r.begin];
        vals.push_back(v - one);
        vals.push_back(v);
        vals.push_back(v + one);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<std::optional<S>> out;
    out.push_back(std::nullopt);  // FAR first
    for (auto& v : vals) out.push_back(std::move(v));
    return out;
}

template <class S>
SearchScore<S> search_branch(const OpinionState<S>& state, int depth, const SearchOptions& opts,
                             long& nodes, ControlDirective<S>* best_first) {
    auto cands = search_candidates(state);
    ControlDirective<S> d = ControlDirective<S>::all_far(state.m());
    std::optional<SearchScore<S>> best;

    std::vector<std::size_t> pick(state.m(), 0);
    while (true) {
        for (std::size_t j = 0; j < state.m(); ++j) d.positions[j] = cands[pick[j]];
        if (++nodes > opts.node_cap)
            throw Error(ErrorCode::BudgetExceeded, "search branch cap exceeded");
        OpinionState<S> next = hk_step(state, d);
        SearchScore<S> score{};
        if (has_converged(next)) {
            score = {depth + 1, scalar_traits<S>::from_int(0)};
        } else if (depth + 1 >= opts.horizon) {
            score = {opts.horizon + 1, total_width(next)};
        } else {
            score = search_branch<S>(next, depth + 1, opts, nodes, nullptr);
        }
        if (!best || score.better_than(*best)) {
            best = score;
            if (best_first) *best_first = d;
        }
        // advance the mixed-radix counter over candidate picks
        std::size_t j = 0;
        for (; j < state.m(); ++j) {
            if (++pick[j] < cands.size()) break;
            pick[j] = 0;
        }
        if (j == state.m()) break;  // covers m == 0: the lone passive branch
    }
    return *best;
}

}  // namespace detail

template <class S>
SearchOutcome<S> bounded_search(const OpinionState<S>& state, const SearchOptions& opts = {}) {
    if (opts.horizon < 1 || opts.horizon > opts.max_horizon)
        throw Error(ErrorCode::InvalidParam, "search horizon outside guard rails");
    if (state.n() > opts.max_n || state.m() > opts.max_m)
        throw Error(ErrorCode::InvalidParam, "state too large for exhaustive search");
    SearchOutcome<S> out;
    out.first = ControlDirective<S>::all_far(state.m());
    auto score = detail::search_branch(state, 0, opts, out.nodes, &out.first);
    if (score.steps <= opts.horizon) out.converge_steps = score.steps;
    return out;
}

template <class S>
class BoundedSearchController : public Controller<S> {
public:
    explicit BoundedSearchController(const SearchOptions& opts) : opts_(opts) {}

    std::string name() const override { return "search"; }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        if (has_converged(state)) return ControlDirective<S>::all_far(state.m());
        return bounded_search(state, opts_).first;
    }

private:
    SearchOptions opts_;
};

// --- seeded random directives (test plumbing) -------------------------------------

// Each strategic agent goes FAR with probability 1/4, otherwise lands on a
// uniform 1/64-grid point within [min - 1, max + 1].
template <class S>
class RandomController : public Controller<S> {
public:
    explicit RandomController(std::uint64_t seed) : rng_(seed) {}

    std::string name() const override { return "random"; }

    ControlDirective<S> step(const OpinionState<S>& state) override {
        auto d = ControlDirective<S>::all_far(state.m());
        auto [lo, hi] = grid_bounds(state);
        for (std::size_t j = 0; j < state.m(); ++j) {
            if (rng_.chance(1, 4)) continue;
            long cell = rng_.range(lo, hi);
            d.positions[j] = scalar_traits<S>::from_int(cell) / scalar_traits<S>::from_int(64);
        }
        return d;
    }

private:
    std::pair<long, long> grid_bounds(const OpinionState<S>& state) {
        const S one = scalar_traits<S>::from_int(1);
        const S sixty_four = scalar_traits<S>::from_int(64);
        S lo = (state.nonstrategic.front() - one) * sixty_four;
        S hi = (state.nonstrategic.back() + one) * sixty_four;
        if constexpr (scalar_traits<S>::mode == NumericMode::Rational) {
            BigInt l = numerator(lo) / denominator(lo);  // ceil for negatives handled below
            if (Rational(l) < lo) l += 1;
            BigInt h = numerator(hi) / denominator(hi);
            if (Rational(h) > hi) h -= 1;
            return {l.convert_to<long>(), h.convert_to<long>()};
        } else {
            return {static_cast<long>(std::ceil(lo)), static_cast<long>(std::floor(hi))};
        }
    }

    Rng rng_;
};

// --- selection ----------------------------------------------------------------

// {"controller": name, "params": {...}}
template <class S>
std::unique_ptr<Controller<S>> make_controller(const std::string& name,
                                               const nlohmann::json& params) {
    auto as_rational = [](const nlohmann::json& v) {
        return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
    };
    if (name == "passive") return std::make_unique<PassiveController<S>>();
    if (name == "contraction") return std::make_unique<ContractionController<S>>();
    if (name == "cutter") return std::make_unique<CutterController<S>>();
    if (name == "dumbbell") {
        std::optional<std::size_t> k;
        if (params.contains("k")) k = params.at("k").get<std::size_t>();
        return std::make_unique<DumbbellController<S>>(k);
    }
    if (name == "mass") return std::make_unique<MassController<S>>();
    if (name == "hybrid") {
        if (!params.contains("alpha"))
            throw Error(ErrorCode::InvalidParam, "hybrid needs parameter 'alpha'");
        return std::make_unique<HybridController<S>>(as_rational(params.at("alpha")));
    }
    if (name == "search") {
        SearchOptions opts;
        if (params.contains("horizon")) opts.horizon = params.at("horizon").get<int>();
        if (params.contains("node_cap")) opts.node_cap = params.at("node_cap").get<long>();
        return std::make_unique<BoundedSearchController<S>>(opts);
    }
    if (name == "random") {
        if (!params.contains("seed"))
            throw Error(ErrorCode::InvalidParam, "random controller needs parameter 'seed'");
        return std::make_unique<RandomController<S>>(params.at("seed").get<std::uint64_t>());
    }
    throw Error(ErrorCode::InvalidParam, "unknown controller: " + name);
}

template <class S>
std::unique_ptr<Controller<S>> make_controller(const nlohmann::json& selection) {
    if (!selection.contains("controller"))
        throw Error(ErrorCode::InvalidParam, "selection needs a 'controller' field");
    return make_controller<S>(selection.at("controller").get<std::string>(),
                              selection.value("params", nlohmann::json::object()));
}

}  // namespace hk
