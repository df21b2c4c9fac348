#pragma once

#include "hk/state.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace hk {

// Maximal block of coincident non-strategic agents [begin, end).
struct Run {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t count() const { return end - begin; }
};

// Value equality. Rationals are kept canonical, so componentwise integer
// equality is exact and avoids the normalizing comparison of operator==,
// which is far too slow once denominators grow to thousands of bits.
template <class S>
bool same_value(const S& a, const S& b) {
    if constexpr (scalar_traits<S>::mode == NumericMode::Rational)
        return numerator(a) == numerator(b) && denominator(a) == denominator(b);
    else
        return a == b;
}

template <class S>
std::vector<Run> opinion_runs(const std::vector<S>& xs) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i + 1;
        while (j < xs.size() && same_value(xs[j], xs[i])) ++j;
        runs.push_back({i, j});
        i = j;
    }
    return runs;
}

// Engaged (non-FAR) strategic opinions sorted ascending by value.
template <class S>
std::vector<std::pair<S, std::size_t>> engaged_strategic(const ControlDirective<S>& d) {
    std::vector<std::pair<S, std::size_t>> out;
    for (std::size_t j = 0; j < d.positions.size(); ++j)
        if (d.positions[j]) out.emplace_back(*d.positions[j], j);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

template <class S>
std::vector<std::pair<S, std::size_t>> engaged_strategic(const OpinionState<S>& st) {
    ControlDirective<S> d;
    d.positions = st.strategic;
    return engaged_strategic(d);
}

// Influence neighborhood of one non-strategic agent: the (contiguous) index
// window of non-strategic agents within distance 1, plus engaged strategic
// agents within distance 1. Self is always inside the window.
struct Neighborhood {
    std::size_t agent = 0;
    std::size_t ns_begin = 0;
    std::size_t ns_end = 0;  // exclusive
    std::vector<std::size_t> strategic;

    bool same_members(const Neighborhood& o) const {
        return ns_begin == o.ns_begin && ns_end == o.ns_end && strategic == o.strategic;
    }
};

namespace detail {

// Per-run windows over runs and over the sorted engaged strategic list. In
// rational mode the values are also rescaled to a shared denominator so the
// window scan (and later the mean computation) works on plain integers;
// comparing rationals directly would cross-multiply huge denominators.
template <class S>
struct RunWindows {
    std::vector<Run> runs;
    std::vector<std::size_t> run_of_agent;
    std::vector<std::pair<S, std::size_t>> strat;       // sorted by value
    std::vector<std::size_t> rlo, rhi;                  // run window, rhi exclusive
    std::vector<std::size_t> slo, shi;                  // strat window, shi exclusive
    BigInt den = 1;                                     // rational mode only:
    std::vector<BigInt> rnum, snum;                     // numerators over den
};

template <class S>
RunWindows<S> run_windows(const OpinionState<S>& state, const ControlDirective<S>& directive) {
    RunWindows<S> w;
    const auto& xs = state.nonstrategic;
    w.runs = opinion_runs(xs);
    w.run_of_agent.resize(xs.size());
    for (std::size_t r = 0; r < w.runs.size(); ++r)
        for (std::size_t i = w.runs[r].begin; i < w.runs[r].end; ++i) w.run_of_agent[i] = r;
    w.strat = engaged_strategic(directive);

    std::size_t nr = w.runs.size();
    std::size_t ns = w.strat.size();
    w.rlo.resize(nr);
    w.rhi.resize(nr);
    w.slo.resize(nr);
    w.shi.resize(nr);
    std::size_t lo = 0, hi = 0, sl = 0, sh = 0;
    if constexpr (scalar_traits<S>::mode == NumericMode::Rational) {
        for (std::size_t r = 0; r < nr; ++r)
            w.den = lcm(w.den, denominator(xs[w.runs[r].begin]));
        for (const auto& sv : w.strat) w.den = lcm(w.den, denominator(sv.first));
        w.rnum.resize(nr);
        w.snum.resize(ns);
        for (std::size_t r = 0; r < nr; ++r) {
            const S& v = xs[w.runs[r].begin];
            w.rnum[r] = numerator(v) * (w.den / denominator(v));
        }
        for (std::size_t s = 0; s < ns; ++s) {
            const S& v = w.strat[s].first;
            w.snum[s] = numerator(v) * (w.den / denominator(v));
        }
        for (std::size_t r = 0; r < nr; ++r) {
            BigInt vm = w.rnum[r] - w.den;
            BigInt vp = w.rnum[r] + w.den;
            while (w.rnum[lo] < vm) ++lo;
            if (hi < r + 1) hi = r + 1;
            while (hi < nr && w.rnum[hi] <= vp) ++hi;
            while (sl < ns && w.snum[sl] < vm) ++sl;
            if (sh < sl) sh = sl;
            while (sh < ns && w.snum[sh] <= vp) ++sh;
            w.rlo[r] = lo;
            w.rhi[r] = hi;
            w.slo[r] = sl;
            w.shi[r] = sh;
        }
    } else {
        const S one = scalar_traits<S>::from_int(1);
        for (std::size_t r = 0; r < nr; ++r) {
            const S& v = xs[w.runs[r].begin];
            while (xs[w.runs[lo].begin] < v - one) ++lo;
            if (hi < r + 1) hi = r + 1;
            while (hi < nr && xs[w.runs[hi].begin] <= v + one) ++hi;
            while (sl < ns && w.strat[sl].first < v - one) ++sl;
            if (sh < sl) sh = sl;
            while (sh < ns && w.strat[sh].first <= v + one) ++sh;
            w.rlo[r] = lo;
            w.rhi[r] = hi;
            w.slo[r] = sl;
            w.shi[r] = sh;
        }
    }
    return w;
}

}  // namespace detail

template <class S>
std::vector<Neighborhood> neighborhoods(const OpinionState<S>& state,
                                        const ControlDirective<S>& directive) {
    auto w = detail::run_windows(state, directive);
    std::vector<Neighborhood> out(state.n());
    for (std::size_t r = 0; r < w.runs.size(); ++r) {
        Neighborhood nb;
        nb.ns_begin = w.runs[w.rlo[r]].begin;
        nb.ns_end = w.runs[w.rhi[r] - 1].end;
        std::vector<std::size_t> strat;
        for (std::size_t s = w.slo[r]; s < w.shi[r]; ++s) strat.push_back(w.strat[s].second);
        std::sort(strat.begin(), strat.end());
        for (std::size_t i = w.runs[r].begin; i < w.runs[r].end; ++i) {
            nb.agent = i;
            nb.strategic = strat;
            out[i] = nb;
        }
    }
    return out;
}

// Passive variant: every strategic agent FAR.
template <class S>
std::vector<Neighborhood> neighborhoods(const OpinionState<S>& state) {
    return neighborhoods(state, ControlDirective<S>::all_far(state.m()));
}

struct StepOptions {
    int bit_budget = kDefaultBitBudget;
};

// One synchronous update: every non-strategic agent moves to the average of
// its neighborhood; strategic agents take the directive's next positions.
template <class S>
OpinionState<S> hk_step(const OpinionState<S>& state, const ControlDirective<S>& directive,
                        const StepOptions& opts = {}) {
    if (directive.size() != state.m())
        throw Error(ErrorCode::InvalidParam, "directive length must equal m");
    const auto& xs = state.nonstrategic;
    auto w = detail::run_windows(state, directive);
    std::size_t nr = w.runs.size();

    std::vector<S> mean(nr);
    if constexpr (scalar_traits<S>::mode == NumericMode::Rational) {
        // Exact arithmetic is order-independent, so prefix sums give each
        // window sum in O(1). Summing rationals directly would re-normalize
        // ever larger intermediates on every add; instead prefix-sum the
        // integer numerators over the shared denominator from run_windows.
        std::vector<BigInt> pre(nr + 1), spre(w.strat.size() + 1);
        std::vector<std::size_t> cnt(nr + 1, 0);
        for (std::size_t r = 0; r < nr; ++r) {
            pre[r + 1] = pre[r] + w.rnum[r] * w.runs[r].count();
            cnt[r + 1] = cnt[r] + w.runs[r].count();
        }
        for (std::size_t s = 0; s < w.strat.size(); ++s) spre[s + 1] = spre[s] + w.snum[s];
        BigInt prev_sum;
        std::size_t prev_count = 1;
        for (std::size_t r = 0; r < nr; ++r) {
            BigInt sum = pre[w.rhi[r]] - pre[w.rlo[r]] + spre[w.shi[r]] - spre[w.slo[r]];
            std::size_t count = cnt[w.rhi[r]] - cnt[w.rlo[r]] + (w.shi[r] - w.slo[r]);
            if (r > 0 && sum * prev_count < prev_sum * count)
                throw Error(ErrorCode::Internal, "update broke the opinion order");
            mean[r] = S(sum, w.den * count);  // normalizing constructor
            check_bit_budget(mean[r], opts.bit_budget);
            prev_sum = std::move(sum);
            prev_count = count;
        }
    } else {
        // Fixed summation order: ascending runs (ties grouped as value*count),
        // then engaged strategic agents ascending by value. Identical
        // neighborhoods therefore produce bit-identical means.
        for (std::size_t r = 0; r < nr; ++r) {
            S sum = scalar_traits<S>::from_int(0);
            std::size_t count = 0;
            for (std::size_t q = w.rlo[r]; q < w.rhi[r]; ++q) {
                sum += xs[w.runs[q].begin] * static_cast<double>(w.runs[q].count());
                count += w.runs[q].count();
            }
            for (std::size_t s = w.slo[r]; s < w.shi[r]; ++s) sum += w.strat[s].first;
            count += w.shi[r] - w.slo[r];
            mean[r] = sum / static_cast<double>(count);
        }
        // Rounding guard: exact means are weakly ascending; clamp ulp-level
        // inversions so the state invariant holds in float mode too.
        for (std::size_t r = 1; r < nr; ++r)
            if (mean[r] < mean[r - 1]) mean[r] = mean[r - 1];
    }

    OpinionState<S> next;
    next.t = state.t + 1;
    next.nonstrategic.resize(xs.size());
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t i = w.runs[r].begin; i < w.runs[r].end; ++i)
            next.nonstrategic[i] = mean[r];
    next.strategic = directive.positions;
    return next;
}

// Passive step (all strategic agents FAR).
template <class S>
OpinionState<S> hk_step(const OpinionState<S>& state, const StepOptions& opts = {}) {
    return hk_step(state, ControlDirective<S>::all_far(state.m()), opts);
}

// Maximal blocks of non-strategic agents chained by gaps <= 1.
template <class S>
struct Component {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    S width{};

    std::size_t size() const { return end - begin; }
    std::size_t left() const { return begin; }
    std::size_t right() const { return end - 1; }
};

template <class S>
std::vector<Component<S>> components(const OpinionState<S>& state) {
    const auto& xs = state.nonstrategic;
    const S one = scalar_traits<S>::from_int(1);
    std::vector<Component<S>> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= xs.size(); ++i) {
        if (i == xs.size() || xs[i] - xs[i - 1] > one) {
            out.push_back({start, i, xs[i - 1] - xs[start]});
            start = i;
        }
    }
    return out;
}

template <class S>
S total_width(const OpinionState<S>& state) {
    S sum = scalar_traits<S>::from_int(0);
    for (const auto& c : components(state)) sum += c.width;
    return sum;
}

// Opinion value -> number of coincident non-strategic agents, ascending.
template <class S>
std::vector<std::pair<S, std::size_t>> weight_table(const OpinionState<S>& state) {
    std::vector<std::pair<S, std::size_t>> out;
    for (const auto& r : opinion_runs(state.nonstrategic))
        out.emplace_back(state.nonstrategic[r.begin], r.count());
    return out;
}

template <class S>
std::size_t weight_of(const OpinionState<S>& state, const S& value) {
    const auto& xs = state.nonstrategic;
    auto lo = std::lower_bound(xs.begin(), xs.end(), value);
    auto hi = std::upper_bound(xs.begin(), xs.end(), value);
    return static_cast<std::size_t>(hi - lo);
}

// Frozen: the non-strategic neighborhood contains exactly the agents sharing
// the opinion, so without strategic interference the agent never moves again.
template <class S>
bool is_frozen(const OpinionState<S>& state, std::size_t i) {
    const auto& xs = state.nonstrategic;
    const S one = scalar_traits<S>::from_int(1);
    auto lo = std::lower_bound(xs.begin(), xs.end(), xs[i] - one);
    auto hi = std::upper_bound(xs.begin(), xs.end(), xs[i] + one);
    return static_cast<std::size_t>(hi - lo) == weight_of(state, xs[i]);
}

// Converged: every component has width zero, i.e. adjacent opinions are either
// equal or separated (strictly beyond the influence radius).
template <class S>
bool has_converged(const OpinionState<S>& state) {
    const auto& xs = state.nonstrategic;
    if constexpr (scalar_traits<S>::mode == NumericMode::Rational) {
        // Distinct adjacent runs must sit strictly more than 1 apart. Compare
        // integer numerators over a shared denominator; comparing rationals
        // pairwise would cross-multiply the (large) denominators.
        auto runs = opinion_runs(xs);
        BigInt den = 1;
        for (const auto& r : runs) den = lcm(den, denominator(xs[r.begin]));
        BigInt prev;
        for (std::size_t q = 0; q < runs.size(); ++q) {
            const S& v = xs[runs[q].begin];
            BigInt cur = numerator(v) * (den / denominator(v));
            if (q > 0 && cur - prev <= den) return false;
            prev = std::move(cur);
        }
        return true;
    } else {
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (xs[i] == xs[i - 1]) continue;
            if (!scalar_traits<S>::separated(xs[i] - xs[i - 1])) return false;
        }
        return true;
    }
}

}  // namespace hk
