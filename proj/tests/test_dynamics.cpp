#include "hk/dynamics.hpp"
#include "hk/instances.hpp"
#include "hk/rng.hpp"
#include "oracle.hpp"

#include <doctest.h>

using hk::Rational;

namespace {

hk::OpinionState<Rational> rat_state(std::vector<Rational> xs, std::size_t m = 0) {
    return hk::make_state(std::move(xs), m);
}

}  // namespace

TEST_CASE("neighborhood windows at unit spacing are inclusive") {
    auto st = rat_state({Rational(0), Rational(1), Rational(2)});
    auto ns = hk::neighborhoods(st);
    REQUIRE(ns.size() == 3);
    CHECK(ns[0].ns_begin == 0);
    CHECK(ns[0].ns_end == 2);
    CHECK(ns[1].ns_begin == 0);
    CHECK(ns[1].ns_end == 3);
    CHECK(ns[2].ns_begin == 1);
    CHECK(ns[2].ns_end == 3);
    for (const auto& n : ns) CHECK(n.strategic.empty());
}

TEST_CASE("singleton is a fixed point") {
    auto st = rat_state({Rational(5)});
    auto ns = hk::neighborhoods(st);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0].ns_end - ns[0].ns_begin == 1);
    auto next = hk::hk_step(st);
    CHECK(next.nonstrategic[0] == Rational(5));
    CHECK(next.t == 1);
}

TEST_CASE("one step of the unit-spaced triple") {
    auto st = rat_state({Rational(0), Rational(1), Rational(2)});
    auto next = hk::hk_step(st);
    CHECK(next.nonstrategic[0] == Rational(1) / 2);
    CHECK(next.nonstrategic[1] == Rational(1));
    CHECK(next.nonstrategic[2] == Rational(3) / 2);
}

TEST_CASE("strategic members enter the mean at directive positions") {
    auto st = rat_state({Rational(0), Rational(2)}, 1);
    hk::ControlDirective<Rational> d;
    d.positions = {Rational(1)};
    auto ns = hk::neighborhoods(st, d);
    REQUIRE(ns.size() == 2);
    CHECK(ns[0].strategic == std::vector<std::size_t>{0});
    CHECK(ns[1].strategic == std::vector<std::size_t>{0});
    auto next = hk::hk_step(st, d);
    CHECK(next.nonstrategic[0] == Rational(1) / 2);
    CHECK(next.nonstrategic[1] == Rational(3) / 2);
    CHECK(next.strategic[0] == Rational(1));

    auto far = hk::ControlDirective<Rational>::all_far(1);
    auto still = hk::hk_step(st, far);
    CHECK(still.nonstrategic[0] == Rational(0));
    CHECK(still.nonstrategic[1] == Rational(2));
    CHECK_FALSE(still.strategic[0].has_value());
}

TEST_CASE("directive length must match m") {
    auto st = rat_state({Rational(0)}, 2);
    hk::ControlDirective<Rational> d;
    d.positions = {Rational(0)};
    CHECK_THROWS_AS(hk::hk_step(st, d), hk::Error);
}

TEST_CASE("components split at gaps beyond the radius") {
    auto st = rat_state({Rational(0), Rational(1) / 2, Rational(3)});
    auto comps = hk::components(st);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].begin == 0);
    CHECK(comps[0].end == 2);
    CHECK(comps[0].width == Rational(1) / 2);
    CHECK(comps[1].begin == 2);
    CHECK(comps[1].end == 3);
    CHECK(comps[1].width == Rational(0));

    auto five = hk::to_state<Rational>(hk::gen_equidistant(5));
    auto c5 = hk::components(five);
    REQUIRE(c5.size() == 1);
    CHECK(c5[0].width == Rational(4));
}

TEST_CASE("total width sums component widths") {
    auto st = rat_state({Rational(0), Rational(1) / 2, Rational(3), Rational(16) / 5});
    CHECK(hk::total_width(st) == Rational(7) / 10);
    CHECK(hk::total_width(rat_state({Rational(2), Rational(2), Rational(2)})) == Rational(0));
}

TEST_CASE("weights count shared opinion values") {
    auto st = rat_state({Rational(0), Rational(0), Rational(5) / 2});
    auto table = hk::weight_table(st);
    REQUIRE(table.size() == 2);
    CHECK(table[0] == std::pair<Rational, std::size_t>{Rational(0), 2});
    CHECK(table[1] == std::pair<Rational, std::size_t>{Rational(5) / 2, 1});
    CHECK(hk::weight_of(st, Rational(0)) == 2);
    CHECK(hk::weight_of(st, Rational(1)) == 0);
    CHECK(hk::is_frozen(st, 0));
    CHECK(hk::is_frozen(st, 2));
    CHECK(hk::has_converged(st));
}

TEST_CASE("convergence needs equality or strict separation") {
    CHECK(hk::has_converged(rat_state({Rational(0), Rational(0), Rational(0)})));
    CHECK_FALSE(hk::has_converged(rat_state({Rational(0), Rational(1)})));  // gap exactly 1
    CHECK(hk::has_converged(rat_state({Rational(0), Rational(5) / 2})));

    // distance exactly 1: both agents share the full neighborhood and meet
    auto st = rat_state({Rational(0), Rational(1)});
    auto next = hk::hk_step(st);
    CHECK(next.nonstrategic[0] == Rational(1) / 2);
    CHECK(next.nonstrategic[1] == Rational(1) / 2);
    CHECK(hk::has_converged(next));
}

TEST_CASE("fast path agrees with the naive oracle on random instances") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        hk::Rng meta(seed * 7919);
        std::size_t n = 2 + meta.below(10);
        std::size_t m = meta.below(3);
        long span = 1 + static_cast<long>(meta.below(6));
        auto spec = hk::gen_random(n, m, span, seed);
        auto state = hk::to_state<Rational>(spec);

        hk::Rng dir_rng(seed ^ 0xabcdef123456ull);
        for (int step = 0; step < 4; ++step) {
            hk::ControlDirective<Rational> d;
            for (std::size_t j = 0; j < m; ++j) {
                if (dir_rng.chance(1, 4)) d.positions.push_back(std::nullopt);
                else
                    d.positions.push_back(
                        Rational(static_cast<long>(dir_rng.below(64 * span + 1))) / 64);
            }
            auto fast = hk::hk_step(state, d);
            auto naive = oracle::naive_step(state, d);
            REQUIRE(fast.nonstrategic == naive.nonstrategic);
            REQUIRE(hk::weakly_sorted(fast.nonstrategic));
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(hk::abs_val(fast.nonstrategic[i] - state.nonstrategic[i]) <= Rational(1));

            auto fast_comps = hk::components(state);
            auto naive_comps = oracle::naive_components(state.nonstrategic);
            REQUIRE(fast_comps.size() == naive_comps.size());
            for (std::size_t c = 0; c < fast_comps.size(); ++c) {
                REQUIRE(fast_comps[c].begin == naive_comps[c].first);
                REQUIRE(fast_comps[c].end == naive_comps[c].second);
            }

            auto ns = hk::neighborhoods(state, d);
            for (std::size_t i = 0; i < n; ++i) {
                auto naive_vals =
                    oracle::naive_neighborhood_values(state.nonstrategic[i], state, d);
                REQUIRE(ns[i].ns_end - ns[i].ns_begin + ns[i].strategic.size() ==
                        naive_vals.size());
            }
            state = std::move(fast);
        }
    }
}

TEST_CASE("identical neighborhoods give bit-identical float means") {
    auto st = hk::make_state<double>({0.0, 0.25, 0.75, 1.0}, 0);
    auto ns = hk::neighborhoods(st);
    for (std::size_t i = 1; i < 4; ++i) REQUIRE(ns[i].same_members(ns[0]));
    auto next = hk::hk_step(st);
    CHECK(next.nonstrategic[0] == next.nonstrategic[1]);
    CHECK(next.nonstrategic[1] == next.nonstrategic[2]);
    CHECK(next.nonstrategic[2] == next.nonstrategic[3]);
    CHECK(next.nonstrategic[0] == 0.5);
}

TEST_CASE("rational overflow budget raises instead of degrading") {
    auto st = rat_state({Rational(0), Rational(1) / 3, Rational(1)});
    hk::StepOptions opts;
    opts.bit_budget = 2;
    CHECK_THROWS_AS(hk::hk_step(st, hk::ControlDirective<Rational>::all_far(0), opts), hk::Error);
}
